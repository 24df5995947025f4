//! Twisting-matrix displays, before their constraints are solved.

use super::{pm, q_mono, qdiff, reflect, FFamily};
use crate::lattice::appendix_a_closed_form;
use crate::scalar::{Monomial, Scalar, Variable};
use crate::{LeggedMatrix, Matrix};

pub(super) fn build(family: FFamily, n: usize) -> Matrix {
    match family {
        FFamily::Diagonal => diagonal(n, "f"),
        FFamily::AppendixA => {
            let c = appendix_a_closed_form(n);
            LeggedMatrix::diagonal2(n, |i, j| {
                Scalar::monomial(
                    c.get(&Variable::indexed("f", &[i, j]))
                        .cloned()
                        .unwrap_or_default(),
                )
            })
        }
        FFamily::SimpleRoot { k, l } => {
            let mut f = diagonal(n, "f");
            f.set(&[k, l + 1], &[k + 1, l], Scalar::named("mu"));
            f
        }
        FFamily::CompositeSimpleRoot { k } => {
            let mut f = diagonal(n, "f");
            for m in k + 1..n {
                f.set(
                    &[k, m + 1],
                    &[k + 1, m],
                    Scalar::var(Variable::indexed("mu", &[m])),
                );
            }
            f
        }
        FFamily::FgCocycle => fg_cocycle(n),
        FFamily::EkCocycle { eta } => {
            let mut f = diagonal(n, "f");
            let q = q_mono();
            let fee = Scalar::var(Variable::indexed("f", &[eta, eta]));
            let v = qdiff(&q).mul_ref(&Scalar::monomial(q.inv())).mul_ref(&fee);
            f.set(&[eta, eta + 1], &[eta + 1, eta], v);
            f
        }
        FFamily::Gl4Second => {
            let mut f = diagonal(4, "h");
            f.set(&[1, 4], &[3, 2], Scalar::named("lam"));
            f
        }
    }
}

fn diagonal(n: usize, prefix: &str) -> Matrix {
    LeggedMatrix::diagonal2(n, |i, j| Scalar::var(Variable::indexed(prefix, &[i, j])))
}

/// The FG cocycle with `λ_kl = p_{l'l} f_NN (q - q^{-1}) μ_k / μ_l`; the
/// diagonal stays symbolic and is fixed by the constraints.
fn fg_cocycle(big_n: usize) -> Matrix {
    let dim = 2 * big_n - 1;
    let q = q_mono();
    let pr = |i| reflect(big_n, i);
    let mu = |k: usize| Monomial::var(Variable::indexed("mu", &[k]));
    let f_nn = Monomial::var(Variable::indexed("f", &[big_n, big_n]));
    let mut f = diagonal(dim, "f");
    for k in 1..big_n {
        f.set(&[k, pr(k)], &[big_n, big_n], Scalar::monomial(mu(k)));
        for l in k + 1..big_n {
            let m = pm("p", pr(l), l, &q).mul(&f_nn).mul(&mu(k)).div(&mu(l));
            f.set(
                &[k, pr(k)],
                &[l, pr(l)],
                qdiff(&q).mul_ref(&Scalar::monomial(m)),
            );
        }
    }
    f
}
