//! Multivariate polynomial gcd over the rationals by recursive primitive
//! polynomial remainder sequences, plus exact division.
//!
//! All inputs here are genuine polynomials (no negative exponents).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{LaurentPoly, Monomial, Variable};

/// Coefficients of `p` viewed as a univariate polynomial in `x`, indexed
/// by degree.
fn to_univariate(p: &LaurentPoly, x: &Variable) -> Vec<LaurentPoly> {
    let deg = p.degree_in(x).max(0) as usize;
    let mut coeffs = vec![LaurentPoly::zero(); deg + 1];
    for (m, c) in p.terms() {
        let (e, rest) = m.split_off(x);
        coeffs[e as usize].add_term(rest, c.clone());
    }
    trim(&mut coeffs);
    coeffs
}

fn from_univariate(coeffs: &[LaurentPoly], x: &Variable) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (d, c) in coeffs.iter().enumerate() {
        let xd = Monomial::power(x.clone(), d as i64);
        for (m, k) in c.terms() {
            out.add_term(m.mul(&xd), k.clone());
        }
    }
    out
}

fn trim(coeffs: &mut Vec<LaurentPoly>) {
    while coeffs.last().is_some_and(LaurentPoly::is_zero) {
        coeffs.pop();
    }
}

/// Pseudo-remainder of `a` by `b` in the main variable. `b` is nonempty.
fn prem(a: &[LaurentPoly], b: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<LaurentPoly> = a.to_vec();
    if r.len() < b.len() {
        return r;
    }
    let mut e = r.len() - b.len() + 1;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&lr));
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn smallest_variable(a: &LaurentPoly, b: &LaurentPoly) -> Option<Variable> {
    let mut vars = a.variables();
    vars.extend(b.variables());
    vars.into_iter().next()
}

/// Exact quotient `a / b` of polynomials, or `None` when `b` does not
/// divide `a`.
pub fn div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    if let Some((m, c)) = b.as_term() {
        if !a.terms().all(|(am, _)| m.divides(am)) {
            return None;
        }
        return Some(a.mul_term(&m.inv(), &c.recip()));
    }
    let (lm_b, lc_b) = {
        let (m, c) = b.leading()?;
        (m.clone(), c.clone())
    };
    let mut q = LaurentPoly::zero();
    let mut r = a.clone();
    while let Some((lm_r, lc_r)) = r.leading() {
        if !lm_b.divides(lm_r) {
            return None;
        }
        let tm = lm_r.div(&lm_b);
        let tc = lc_r / &lc_b;
        r = r.sub(&b.mul_term(&tm, &tc));
        q.add_term(tm, tc);
    }
    Some(q)
}

fn content_in(coeffs: &[LaurentPoly]) -> LaurentPoly {
    let mut g = LaurentPoly::zero();
    for c in coeffs {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Splits off the content in the coefficient ring, then clears rational
/// constants so the primitive part has coprime integer coefficients.
fn split_content(coeffs: &[LaurentPoly]) -> (LaurentPoly, Vec<LaurentPoly>) {
    let c = content_in(coeffs);
    let pp: Vec<LaurentPoly> = if c.is_one() || c.is_zero() {
        coeffs.to_vec()
    } else {
        coeffs
            .iter()
            .map(|k| div_exact(k, &c).expect("content divides every coefficient"))
            .collect()
    };
    (c, integer_primitive(pp))
}

fn primitive_part(coeffs: &[LaurentPoly]) -> Vec<LaurentPoly> {
    split_content(coeffs).1
}

fn integer_primitive(coeffs: Vec<LaurentPoly>) -> Vec<LaurentPoly> {
    let mut den_lcm = BigInt::one();
    let mut num_gcd = BigInt::zero();
    for c in &coeffs {
        for (_, k) in c.terms() {
            den_lcm = den_lcm.lcm(k.denom());
            num_gcd = num_gcd.gcd(k.numer());
        }
    }
    if num_gcd.is_zero() || (den_lcm.is_one() && num_gcd.is_one()) {
        return coeffs;
    }
    let f = BigRational::new(den_lcm, num_gcd);
    coeffs.iter().map(|c| c.scale(&f)).collect()
}

/// Greatest common divisor of two polynomials, normalized to have
/// lex-leading coefficient 1. `gcd(0, 0) = 0`.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return LaurentPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.min_exponents(&mb);
    if !ma.is_one() || !mb.is_one() {
        let a1 = a.mul_monomial(&ma.inv());
        let b1 = b.mul_monomial(&mb.inv());
        return gcd(&a1, &b1).mul_monomial(&m);
    }
    let Some(x) = smallest_variable(a, b) else {
        return LaurentPoly::one();
    };
    if !a.contains_var(&x) {
        return gcd(a, &content_in(&to_univariate(b, &x)));
    }
    if !b.contains_var(&x) {
        return gcd(&content_in(&to_univariate(a, &x)), b);
    }
    let ua = to_univariate(a, &x);
    let ub = to_univariate(b, &x);
    let (ca, mut pa) = split_content(&ua);
    let (cb, mut pb) = split_content(&ub);
    let c = gcd(&ca, &cb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    // Subresultant remainder sequence: exact divisions keep coefficient
    // growth polynomial without computing contents at every step.
    let mut g = LaurentPoly::one();
    let mut h = LaurentPoly::one();
    loop {
        let delta = (pa.len() - pb.len()) as u32;
        let r = prem(&pa, &pb);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            pb = vec![LaurentPoly::one()];
            break;
        }
        let divisor = g.mul(&h.pow(delta));
        let next: Vec<LaurentPoly> = r
            .iter()
            .map(|k| div_exact(k, &divisor).expect("subresultant division is exact"))
            .collect();
        pa = std::mem::replace(&mut pb, next);
        g = pa.last().expect("nonempty").clone();
        h = if delta == 0 {
            h
        } else {
            let gd = g.pow(delta);
            div_exact(&gd, &h.pow(delta - 1)).expect("subresultant division is exact")
        };
    }
    let g = from_univariate(&primitive_part(&pb), &x);
    g.mul(&c).monic()
}

/// Least common multiple of two nonzero polynomials, monic.
pub fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = gcd(a, b);
    div_exact(&a.mul(b), &g)
        .expect("gcd divides the product")
        .monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn p(s: &str) -> LaurentPoly {
        let v: Scalar = s.parse().unwrap();
        assert!(v.denominator().is_one());
        v.numerator().clone()
    }

    #[test]
    fn univariate_gcd() {
        let g = gcd(&p("q^2 - 1"), &p("q^3 - 1"));
        assert_eq!(g, p("q - 1"));
    }

    #[test]
    fn multivariate_gcd() {
        let a = p("(x + y)*(x - 2*z)*(y*z + 1)");
        let b = p("(x + y)*(y*z + 1)^2*(x + 3)");
        let g = gcd(&a, &b);
        assert_eq!(g, p("(x + y)*(y*z + 1)").monic());
    }

    #[test]
    fn coprime_gives_one() {
        assert!(gcd(&p("x + 1"), &p("y + 1")).is_one());
        assert!(gcd(&p("x^2 + y^2"), &p("x + y")).is_one());
    }

    #[test]
    fn exact_division() {
        let a = p("(x + y)*(x - y)");
        assert_eq!(div_exact(&a, &p("x - y")), Some(p("x + y")));
        assert_eq!(div_exact(&p("x + 1"), &p("x - 1")), None);
        assert_eq!(
            div_exact(&LaurentPoly::zero(), &p("x")),
            Some(LaurentPoly::zero())
        );
    }

    #[test]
    fn gcd_with_monomial_factors() {
        let g = gcd(&p("x^2*y + x^2"), &p("x*y^2 - x"));
        assert_eq!(g, p("x*y + x"));
    }

    #[test]
    fn rational_coefficients() {
        let g = gcd(&p("1/2*x^2 - 1/2"), &p("3*x + 3"));
        assert_eq!(g, p("x + 1"));
    }
}
