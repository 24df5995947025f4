//! The diagonal cocycle constraints of the Cremmer–Gervais R-matrix and
//! their four-parameter solution.

use std::collections::BTreeMap;

use super::{LatticeError, MonomialConstraintSystem, SolutionLattice};
use crate::scalar::{Monomial, Variable};

fn f(i: usize, j: usize) -> Variable {
    Variable::indexed("f", &[i, j])
}

fn mono(pairs: &[(&Variable, i64)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().map(|(v, e)| ((*v).clone(), *e)))
}

/// `f_{ia} f_{ja} = f_{sa} f_{ta}` and `f_{ai} f_{aj} = f_{as} f_{at}` for
/// `i < s < j`, `t = i + j - s`, on the `n^2` unknowns `f_ij`.
///
/// Unknowns are ordered so that `f_11, f_12, f_21, f_22` are eliminated
/// last and survive as the free generators.
pub fn appendix_a_system(n: usize) -> MonomialConstraintSystem {
    let mut unknowns: Vec<Variable> = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            if i > 2 || j > 2 {
                unknowns.push(f(i, j));
            }
        }
    }
    unknowns.extend(
        [f(1, 1), f(1, 2), f(2, 1), f(2, 2)]
            .into_iter()
            .filter(|_| n >= 2),
    );
    let mut sys = MonomialConstraintSystem::new(unknowns);
    for i in 1..=n {
        for j in i + 2..=n {
            for s in i + 1..j {
                let t = i + j - s;
                for a in 1..=n {
                    sys.add(
                        mono(&[(&f(i, a), 1), (&f(j, a), 1)]),
                        mono(&[(&f(s, a), 1), (&f(t, a), 1)]),
                    );
                    sys.add(
                        mono(&[(&f(a, i), 1), (&f(a, j), 1)]),
                        mono(&[(&f(a, s), 1), (&f(a, t), 1)]),
                    );
                }
            }
        }
    }
    sys
}

/// `f_ij = x^{(i-2)(j-2)} y^{-(i-2)(j-1)} z^{-(i-1)(j-2)} w^{(i-1)(j-1)}`.
pub fn appendix_a_closed_form(n: usize) -> SolutionLattice {
    let [x, y, z, w] = ["x", "y", "z", "w"].map(Variable::named);
    let mut assignment = BTreeMap::new();
    for i in 1..=n as i64 {
        for j in 1..=n as i64 {
            let m = mono(&[
                (&x, (i - 2) * (j - 2)),
                (&y, -(i - 2) * (j - 1)),
                (&z, -(i - 1) * (j - 2)),
                (&w, (i - 1) * (j - 1)),
            ]);
            assignment.insert(f(i as usize, j as usize), m);
        }
    }
    SolutionLattice {
        free: vec![x, y, z, w],
        assignment,
        rank: 4,
        relation_rank: n * n - 4,
    }
}

/// Solves the system for size `n`, checks that the solution torus has
/// dimension four, and checks that the closed form satisfies every
/// relation. The first component is true when both hold.
pub fn verify_appendix_a(n: usize) -> Result<(bool, SolutionLattice), LatticeError> {
    if n < 3 {
        return Err(LatticeError::BadInput(format!("size {n} is below 3")));
    }
    let sys = appendix_a_system(n);
    let solved = sys.solve()?;
    let closed = appendix_a_closed_form(n);
    let holds = sys.satisfied_by(&closed);
    Ok((solved.rank == 4 && holds, solved))
}

/// The substituted twist parameters of the Cremmer–Gervais family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgNormalForm {
    /// `y^{-1} z qr^{-2}`.
    pub p: Monomial,
    /// `x^{-1} y z w^{-1}`.
    pub lambda: Monomial,
    /// `q_ij = f_ij f_ji^{-1} qr^{-2(i-j)}` for all `i, j`.
    pub q: BTreeMap<(usize, usize), Monomial>,
    /// `λ_ijst = f_ij f_st^{-1} qr^{-2(i-s)}` for `i < s < j` or `j < s < i`,
    /// `t = i + j - s`.
    pub lambdas: BTreeMap<(usize, usize, usize, usize), Monomial>,
}

impl CgNormalForm {
    /// Every quantity keyed by its variable name, plus `p` and `lam`.
    pub fn to_map(&self) -> BTreeMap<String, Monomial> {
        let mut out = BTreeMap::new();
        out.insert("p".to_string(), self.p.clone());
        out.insert("lam".to_string(), self.lambda.clone());
        for (&(i, j), m) in &self.q {
            out.insert(
                Variable::indexed("q", &[i, j]).name().to_string(),
                m.clone(),
            );
        }
        for (&(i, j, s, t), m) in &self.lambdas {
            out.insert(
                Variable::indexed("lam", &[i, j, s, t]).name().to_string(),
                m.clone(),
            );
        }
        out
    }
}

/// Substitutes the closed form into the twist parameters and asserts
/// `q_ij = p^{i-j}`, `λ_ijst = p^{i-s} λ^{st-ij}`, `λ_jist = q_ji λ_ijst`
/// and `λ_ijts = q_st λ_ijst`.
pub fn cg_normal_form(n: usize) -> Result<CgNormalForm, LatticeError> {
    if n < 3 {
        return Err(LatticeError::BadInput(format!("size {n} is below 3")));
    }
    let closed = appendix_a_closed_form(n);
    let fv = |i: usize, j: usize| closed.get(&f(i, j)).cloned().expect("closed form covers f");
    let qr = Variable::named("qr");
    let [x, y, z, w] = ["x", "y", "z", "w"].map(Variable::named);
    let p = mono(&[(&y, -1), (&z, 1), (&qr, -2)]);
    let lambda = mono(&[(&x, -1), (&y, 1), (&z, 1), (&w, -1)]);
    let qpow = |e: i64| Monomial::power(qr.clone(), e);
    let fail = |what: String| LatticeError::AssertionFailure(what);

    let mut q = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let d = i as i64 - j as i64;
            let got = fv(i, j).div(&fv(j, i)).mul(&qpow(-2 * d));
            if got != p.pow(d) {
                return Err(fail(format!("q_{i}{j} = {got}, expected {}", p.pow(d))));
            }
            q.insert((i, j), got);
        }
    }
    let mut lambdas = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            for s in i.min(j) + 1..i.max(j) {
                let t = i + j - s;
                let d = i as i64 - s as i64;
                let got = fv(i, j).div(&fv(s, t)).mul(&qpow(-2 * d));
                let e = (s * t) as i64 - (i * j) as i64;
                let expected = p.pow(d).mul(&lambda.pow(e));
                if got != expected {
                    return Err(fail(format!(
                        "lambda_{i}{j}{s}{t} = {got}, expected {expected}"
                    )));
                }
                lambdas.insert((i, j, s, t), got);
            }
        }
    }
    for (&(i, j, s, t), l) in &lambdas {
        if lambdas[&(j, i, s, t)] != q[&(j, i)].mul(l) {
            return Err(fail(format!(
                "lambda_{j}{i}{s}{t} != q_{j}{i} lambda_{i}{j}{s}{t}"
            )));
        }
        if lambdas[&(i, j, t, s)] != q[&(s, t)].mul(l) {
            return Err(fail(format!(
                "lambda_{i}{j}{t}{s} != q_{s}{t} lambda_{i}{j}{s}{t}"
            )));
        }
    }
    Ok(CgNormalForm {
        p,
        lambda,
        q,
        lambdas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_relations_of_rank_five_for_three() {
        let sys = appendix_a_system(3);
        assert_eq!(sys.relations().len(), 6);
        assert_eq!(sys.relation_rank(), 5);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.rank, 4);
        assert_eq!(sol.free, vec![f(1, 1), f(1, 2), f(2, 1), f(2, 2)]);
    }

    #[test]
    fn closed_form_display_for_three() {
        let c = appendix_a_closed_form(3);
        let [x, y, z, w] = ["x", "y", "z", "w"].map(Variable::named);
        assert_eq!(
            c.get(&f(3, 3)),
            Some(&mono(&[(&x, 1), (&y, -2), (&z, -2), (&w, 4)]))
        );
        assert_eq!(c.get(&f(1, 3)), Some(&mono(&[(&x, -1), (&y, 2)])));
        assert_eq!(c.get(&f(2, 2)), Some(&Monomial::var(w)));
    }

    #[test]
    fn solver_reproduces_closed_form() {
        for n in 3..=6 {
            let (ok, sol) = verify_appendix_a(n).unwrap();
            assert!(ok, "n = {n}");
            let closed = appendix_a_closed_form(n);
            let rename: BTreeMap<Variable, Monomial> = [
                (f(1, 1), "x"),
                (f(1, 2), "y"),
                (f(2, 1), "z"),
                (f(2, 2), "w"),
            ]
            .into_iter()
            .map(|(k, v)| (k, Monomial::var(Variable::named(v))))
            .collect();
            for (k, m) in &sol.assignment {
                let renamed = m
                    .iter()
                    .fold(Monomial::one(), |acc, (v, e)| acc.mul(&rename[v].pow(e)));
                assert_eq!(Some(&renamed), closed.get(k), "{k} at n = {n}");
            }
        }
    }

    #[test]
    fn every_relation_takes_part_in_the_dependency() {
        let sys = appendix_a_system(3);
        for k in 0..6 {
            let reduced = sys.without_relation(k);
            assert_eq!(crate::lattice::integer_rank(&reduced.relation_matrix()), 5);
            let sol = reduced.solve().unwrap();
            assert_eq!((sol.relation_rank, sol.rank), (5, 4));
        }
    }

    #[test]
    fn normal_form_for_small_sizes() {
        for n in 3..=5 {
            let nf = cg_normal_form(n).unwrap();
            let p = nf.p.clone();
            assert_eq!(nf.lambdas[&(1, 3, 2, 2)], p.inv().mul(&nf.lambda));
        }
        let nf = cg_normal_form(3).unwrap();
        let ones: BTreeMap<Variable, Monomial> = ["x", "y", "z", "w"]
            .into_iter()
            .map(|n| (Variable::named(n), Monomial::one()))
            .collect();
        let at_one = |m: &Monomial| {
            m.iter().fold(Monomial::one(), |acc, (v, e)| {
                acc.mul(
                    &ones
                        .get(v)
                        .cloned()
                        .unwrap_or_else(|| Monomial::var(v.clone()))
                        .pow(e),
                )
            })
        };
        assert_eq!(at_one(&nf.p), Monomial::power(Variable::named("qr"), -2));
        assert_eq!(at_one(&nf.lambda), Monomial::one());
        assert!(nf.to_map().contains_key("lam_1322"));
    }
}
