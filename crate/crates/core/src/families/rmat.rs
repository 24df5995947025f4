//! R-matrix displays.

use num_rational::BigRational;

use super::{pm, q_mono, qdiff, reflect, var, RFamily};
use crate::scalar::{Monomial, Scalar, Variable};
use crate::{LeggedMatrix, Matrix};

pub(super) fn build(family: RFamily, n: usize) -> Matrix {
    match family {
        RFamily::Standard => standard(n, |_, _| Monomial::one()),
        RFamily::StandardMulti => standard_multi(n, "p"),
        RFamily::Cg => cg(n),
        RFamily::CgGeneralized => cg_generalized(n),
        RFamily::Fg => fg(n),
        RFamily::FgGeneralized => fg_generalized(n),
        RFamily::Ek { eta } => ek(n, eta, "pt"),
        RFamily::NsGl4 => ns_gl4(),
    }
}

fn sc(m: Monomial) -> Scalar {
    Scalar::monomial(m)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `q` on the diagonal, `off(i, j)` at `i = s != j = t`, `q - q^{-1}` at
/// `i = t < j = s`.
fn standard(n: usize, off: impl Fn(usize, usize) -> Monomial) -> Matrix {
    let q = q_mono();
    let d = qdiff(&q);
    let mut r = LeggedMatrix::zero(n, 2);
    for i in 1..=n {
        for j in 1..=n {
            let diag = if i == j { q.clone() } else { off(i, j) };
            r.set(&[i, j], &[i, j], sc(diag));
            if i < j {
                r.set(&[i, j], &[j, i], d.clone());
            }
        }
    }
    r
}

pub(super) fn standard_multi(n: usize, prefix: &str) -> Matrix {
    let q = q_mono();
    standard(n, |i, j| pm(prefix, i, j, &q))
}

/// Shared shape of the CG displays: `q` and `d = q - q^{-1}` as given,
/// `w(j - s, st - ij)` the weight of each entry.
fn cg_shape(n: usize, q: &Monomial, w: impl Fn(i64, i64) -> Monomial) -> Matrix {
    let d = qdiff(q);
    let mut r = LeggedMatrix::zero(n, 2);
    for i in 1..=n {
        for j in 1..=n {
            for s in 1..=n {
                let Some(t) = (i + j).checked_sub(s).filter(|t| (1..=n).contains(t)) else {
                    continue;
                };
                let js = j as i64 - s as i64;
                let e = (s * t) as i64 - (i * j) as i64;
                let v = if i == j && j == s {
                    sc(q.clone())
                } else if i == s && i < j {
                    sc(q.mul(&w(js, e)))
                } else if i == s && i > j {
                    sc(q.inv().mul(&w(js, e)))
                } else if i == t && i < j {
                    d.clone()
                } else if i < s && s < j {
                    d.mul_ref(&sc(w(js, e)))
                } else if j < s && s < i {
                    d.mul_ref(&sc(w(js, e))).neg_ref()
                } else {
                    continue;
                };
                r.set(&[i, j], &[s, t], v);
            }
        }
    }
    r
}

/// Cremmer–Gervais with `q = qr^n`, so `q^{-2(j-s)/n} = qr^{-2(j-s)}`.
fn cg(n: usize) -> Matrix {
    let qr = var("qr");
    let q = Monomial::power(qr.clone(), n as i64);
    cg_shape(n, &q, |js, _| Monomial::power(qr.clone(), -2 * js))
}

fn cg_generalized(n: usize) -> Matrix {
    let (p, lam) = (var("p"), var("lam"));
    cg_shape(n, &q_mono(), |js, e| {
        Monomial::from_pairs([(p.clone(), js), (lam.clone(), e)])
    })
}

fn kappa(i: usize) -> Monomial {
    Monomial::var(Variable::indexed("k", &[i]))
}

/// `κ̃_i = -q^{2(N-i)} κ_i`.
fn kappa_t(big_n: usize, i: usize) -> Scalar {
    let q = var("q");
    Scalar::term(
        Monomial::power(q, 2 * (big_n - i) as i64).mul(&kappa(i)),
        int(-1),
    )
}

/// `ξ_ij = (1 - q^2) κ_i / κ_j`.
fn xi(i: usize, j: usize) -> Scalar {
    let q = q_mono();
    let one_minus = Scalar::one().sub_ref(&sc(q.pow(2)));
    one_minus.mul_ref(&sc(kappa(i).div(&kappa(j))))
}

/// `ξ̃_ij = (1 - q^{-2}) q^{2(j-i)} κ_i / κ_j`.
fn xi_t(i: usize, j: usize) -> Scalar {
    let q = q_mono();
    let one_minus = Scalar::one().sub_ref(&sc(q.pow(-2)));
    let e = 2 * (j as i64 - i as i64);
    one_minus.mul_ref(&sc(q.pow(e).mul(&kappa(i)).div(&kappa(j))))
}

/// Fronsdal–Galindo on dimension `2N - 1`. `diag(i, j)` gives the
/// `i = s, j = t` entries off the main diagonal and `scale(i, j)` the
/// multiplier of each off-diagonal slot named by its row.
fn fg_shape(
    big_n: usize,
    diag: impl Fn(usize, usize) -> Monomial,
    scale: impl Fn(usize, usize) -> Monomial,
) -> Matrix {
    let dim = 2 * big_n - 1;
    let q = q_mono();
    let d = qdiff(&q);
    let pr = |i| reflect(big_n, i);
    let mut r = LeggedMatrix::zero(dim, 2);
    for i in 1..=dim {
        for j in 1..=dim {
            let v = if i == j { q.clone() } else { diag(i, j) };
            r.set(&[i, j], &[i, j], sc(v));
            if i < j {
                r.set(&[i, j], &[j, i], d.clone());
            }
        }
    }
    for i in 1..big_n {
        let (a, b) = (scale(i, pr(i)), scale(pr(i), i));
        r.set(&[i, pr(i)], &[big_n, big_n], sc(q.mul(&a).mul(&kappa(i))));
        r.set(
            &[pr(i), i],
            &[big_n, big_n],
            kappa_t(big_n, i).mul_ref(&sc(q.mul(&b))),
        );
        for s in i + 1..big_n {
            let (a2, b2) = (scale(s, pr(s)), scale(pr(s), s));
            r.set(
                &[i, pr(i)],
                &[s, pr(s)],
                xi(i, s).mul_ref(&sc(q.inv().mul(&a).mul(&a2))),
            );
            r.set(
                &[pr(i), i],
                &[pr(s), s],
                xi_t(i, s).mul_ref(&sc(q.mul(&b).mul(&b2))),
            );
        }
    }
    r
}

fn fg(big_n: usize) -> Matrix {
    let q = q_mono();
    fg_shape(
        big_n,
        |i, j| {
            if i == reflect(big_n, j) && j < big_n {
                q.clone()
            } else if j == reflect(big_n, i) && i < big_n {
                q.inv()
            } else {
                Monomial::one()
            }
        },
        |_, _| Monomial::one(),
    )
}

fn fg_generalized(big_n: usize) -> Matrix {
    let q = q_mono();
    let p = |i, j| pm("p", i, j, &q);
    let pr = |i| reflect(big_n, i);
    fg_shape(
        big_n,
        |i, j| {
            if i == pr(j) && j < big_n {
                q.mul(&p(i, pr(i)).pow(2))
            } else if j == pr(i) && i < big_n {
                q.inv().mul(&p(i, pr(i)).pow(2))
            } else if i == big_n {
                p(pr(j), j)
            } else if j == big_n {
                p(i, pr(i))
            } else {
                p(i, j).mul(&p(i, pr(i))).mul(&p(pr(j), i))
            }
        },
        p,
    )
}

/// Standard multiparameter shape with the `η, η+1` block flipped:
/// the slot `(η, η+1) → (η+1, η)` vanishes and `(η+1, η) → (η, η+1)`
/// carries `q - q^{-1}`.
pub(super) fn ek(n: usize, eta: usize, prefix: &str) -> Matrix {
    let mut r = standard_multi(n, prefix);
    r.set(&[eta, eta + 1], &[eta + 1, eta], Scalar::zero());
    r.set(&[eta + 1, eta], &[eta, eta + 1], qdiff(&q_mono()));
    r
}

fn ns_gl4() -> Matrix {
    let q = q_mono();
    let mut r = ek(4, 2, "g");
    let rho = Monomial::var(var("rho"));
    r.set(&[1, 4], &[3, 2], sc(pm("g", 1, 4, &q).mul(&rho)));
    r.set(
        &[4, 1],
        &[2, 3],
        Scalar::term(pm("g", 2, 3, &q).mul(&rho), int(-1)),
    );
    r
}
