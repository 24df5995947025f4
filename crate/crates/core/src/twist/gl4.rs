//! The two-stage twist of the multiparameter `GL(4)` R-matrix.

use std::collections::BTreeMap;

use thiserror::Error;

use super::twist;
use crate::families::{build_f, build_r, FFamily, FamilyError, FamilySpec, RFamily};
use crate::lattice::{
    reduce_by_constraints, reduce_scalar, LatticeError, MonomialConstraintSystem,
};
use crate::scalar::{Monomial, Scalar, Variable};
use crate::tensor::TensorError;
use crate::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoubleTwistError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("first stage does not match the EK display: {0}")]
    FirstStage(String),
    #[error("{0} is not a monomial after the second-stage constraints")]
    NotMonomial(String),
    #[error("result still depends on {0}")]
    Leftover(String),
}

fn ix(prefix: &str, i: usize, j: usize) -> Variable {
    Variable::indexed(prefix, &[i, j])
}

/// `twist(STANDARD_MULTI(4), EK_COCYCLE(4, η = 2))`, in `p` and the
/// surviving `f`, with the substitution `pt_ij = p_ij f_ji / f_ij` that
/// turns the EK display into it.
pub fn ek_first_stage() -> Result<(Matrix, BTreeMap<Variable, Scalar>), DoubleTwistError> {
    let f_spec = FamilySpec::f(FFamily::EkCocycle { eta: 2 }, 4)?;
    let lattice = f_spec.lattice()?;
    let f = build_f(&f_spec)?;
    let r = reduce_by_constraints(
        &build_r(&FamilySpec::r(RFamily::StandardMulti, 4)?)?,
        &lattice,
    )?;
    let twisted = twist(&r, &f)?;
    let mut pt = BTreeMap::new();
    for i in 1..=4 {
        for j in i + 1..=4 {
            let v = Scalar::var(ix("p", i, j))
                .mul_ref(&Scalar::var(ix("f", j, i)))
                .div_ref(&Scalar::var(ix("f", i, j)))
                .expect("f_ij is a nonzero symbol");
            pt.insert(ix("pt", i, j), reduce_scalar(&v, &lattice)?);
        }
    }
    Ok((twisted, pt))
}

/// `γ_ij = pt_ij h_ji / h_ij` for `i < j` and `ϱ' = λ / h_32` (so that
/// `ϱ = -ϱ'`), in the generators of the GL4_SECOND constraints.
pub fn gamma_images() -> Result<BTreeMap<Variable, Scalar>, DoubleTwistError> {
    let lattice = FamilySpec::f(FFamily::Gl4Second, 4)?.lattice()?;
    let h = |i, j| Scalar::var(ix("h", i, j));
    let mut out = BTreeMap::new();
    for i in 1..=4 {
        for j in i + 1..=4 {
            let g = Scalar::var(ix("pt", i, j))
                .mul_ref(&h(j, i))
                .div_ref(&h(i, j));
            let g = g.expect("h_ij is a nonzero symbol");
            out.insert(ix("g", i, j), reduce_scalar(&g, &lattice)?);
        }
    }
    let rho = Scalar::named("lam")
        .div_ref(&h(3, 2))
        .expect("h_32 is a nonzero symbol");
    out.insert(Variable::named("rho"), reduce_scalar(&rho, &lattice)?);
    Ok(out)
}

/// Twists STANDARD_MULTI(4) by the EK cocycle at `η = 2`, then the result
/// by GL4_SECOND, and rewrites the outcome in `γ_12, γ_23, γ_34, ϱ` where
/// `γ_ij = pt_ij h_ji / h_ij` and `ϱ = -λ / h_32`.
pub fn double_twist_gl4() -> Result<Matrix, DoubleTwistError> {
    let (first, pt) = ek_first_stage()?;
    let ek = build_r(&FamilySpec::r(RFamily::Ek { eta: 2 }, 4)?)?;
    let ek_in_p = ek
        .try_map(|s| s.subs(&pt))
        .map_err(|e| DoubleTwistError::FirstStage(e.to_string()))?;
    if ek_in_p != first {
        let diff = ek_in_p.sub(&first)?;
        let (row, col, v) = diff.iter().next().expect("matrices differ");
        return Err(DoubleTwistError::FirstStage(format!(
            "{row:?} -> {col:?}: {v}"
        )));
    }

    let f_spec = FamilySpec::f(FFamily::Gl4Second, 4)?;
    let lattice = f_spec.lattice()?;
    let f = build_f(&f_spec)?;
    let second = twist(&reduce_by_constraints(&ek, &lattice)?, &f)?;

    let images = gamma_images()?;
    let rho = Variable::named("rho");
    let basis = ["g_12", "g_23", "g_34", "rho"].map(Variable::named);
    let mut sys = MonomialConstraintSystem::new(lattice.free.clone());
    for name in &basis {
        let m = images[name]
            .as_monomial()
            .ok_or_else(|| DoubleTwistError::NotMonomial(name.name().to_string()))?;
        sys.add(m, Monomial::var(name.clone()));
    }
    let rewrite = sys.solve()?;
    let sign: BTreeMap<Variable, Scalar> = [(rho.clone(), Scalar::var(rho).neg_ref())].into();
    let out = reduce_by_constraints(&second, &rewrite)?
        .try_map(|s| s.subs(&sign))
        .map_err(|e| DoubleTwistError::NotMonomial(e.to_string()))?;
    let allowed: Vec<Variable> = ["q", "g_12", "g_23", "g_34", "rho"]
        .into_iter()
        .map(Variable::named)
        .collect();
    for (_, _, s) in out.iter() {
        if let Some(v) = s.variables().into_iter().find(|v| !allowed.contains(v)) {
            return Err(DoubleTwistError::Leftover(v.name().to_string()));
        }
    }
    Ok(out)
}
