use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::{div_exact, gcd};
use super::laurent::EvalFailure;
use super::{LaurentPoly, Monomial, ScalarError, Variable};

/// An element of the fraction field of Laurent polynomials over the
/// rationals, kept in canonical form.
///
/// The denominator is a genuine polynomial with no monomial factor and
/// lex-leading coefficient 1, and it shares no factor with the numerator.
/// Monomial factors of the denominator are carried by the numerator as
/// negative exponents, so most values met in practice have denominator 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_poly(LaurentPoly::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Scalar::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Scalar {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn var(v: Variable) -> Self {
        Scalar::from_poly(LaurentPoly::var(v))
    }

    /// The variable with the given name.
    ///
    /// # Panics
    /// Panics if `name` is not a valid variable name.
    pub fn named(name: &str) -> Self {
        Scalar::var(Variable::named(name))
    }

    pub fn monomial(m: Monomial) -> Self {
        Scalar::from_poly(LaurentPoly::monomial(m))
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        Scalar::from_poly(LaurentPoly::term(m, c))
    }

    /// `num / den` in canonical form.
    pub fn from_fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(normalize(num, den))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Splits a single-term value into its coefficient and monomial.
    pub fn as_term(&self) -> Option<(BigRational, Monomial)> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_term().map(|(m, c)| (c.clone(), m.clone()))
    }

    /// The monomial when the value is exactly a monomial with coefficient 1.
    pub fn as_monomial(&self) -> Option<Monomial> {
        match self.as_term() {
            Some((c, m)) if c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn add_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar::from_poly(self.num.add(&other.num));
        }
        let g = gcd(&self.den, &other.den);
        let b1 = div_exact(&self.den, &g).expect("gcd divides denominator");
        let d1 = div_exact(&other.den, &g).expect("gcd divides denominator");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return Scalar::zero();
        }
        let (num, g1) = cancel(num, &g);
        finish(num, b1.mul(&g1).mul(&d1))
    }

    pub fn sub_ref(&self, other: &Scalar) -> Scalar {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar::from_poly(self.num.mul(&other.num));
        }
        let (a, d) = cancel(self.num.clone(), &other.den);
        let (c, b) = cancel(other.num.clone(), &self.den);
        finish(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div_ref(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut out = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul_ref(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_ref(&b);
            }
        }
        Ok(out)
    }

    /// Exact rational value at a point.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<Variable, BigRational>,
    ) -> Result<BigRational, ScalarError> {
        let lookup = |v: &Variable| assignment.get(v).cloned();
        let n = self.num.eval_with(lookup).map_err(eval_error)?;
        let d = self.den.eval_with(lookup).map_err(eval_error)?;
        if d.is_zero() {
            return Err(ScalarError::DenominatorVanishes);
        }
        Ok(n / d)
    }

    /// Replaces variables by scalars. Variables absent from the map are kept.
    pub fn subs(&self, map: &BTreeMap<Variable, Scalar>) -> Result<Scalar, ScalarError> {
        if !self.variables().iter().any(|v| map.contains_key(v)) {
            return Ok(self.clone());
        }
        let mut powers: BTreeMap<(Variable, i64), Scalar> = BTreeMap::new();
        let n = subs_poly(&self.num, map, &mut powers)?;
        let d = subs_poly(&self.den, map, &mut powers)?;
        if d.is_zero() {
            return Err(ScalarError::DenominatorVanishes);
        }
        n.div_ref(&d)
    }

    /// Replaces variables by monomials; cheaper than [`Scalar::subs`].
    pub fn subs_monomial(&self, map: &BTreeMap<Variable, Monomial>) -> Scalar {
        if !self.variables().iter().any(|v| map.contains_key(v)) {
            return self.clone();
        }
        let n = subs_poly_monomial(&self.num, map);
        let d = subs_poly_monomial(&self.den, map);
        if d.is_one() {
            return Scalar::from_poly(n);
        }
        normalize(n, d)
    }
}

fn eval_error(e: EvalFailure) -> ScalarError {
    match e {
        EvalFailure::Missing(v) => ScalarError::MissingVariable(v.name().to_string()),
        EvalFailure::NegativePowerOfZero(_) => ScalarError::DenominatorVanishes,
    }
}

fn subs_poly_monomial(p: &LaurentPoly, map: &BTreeMap<Variable, Monomial>) -> LaurentPoly {
    LaurentPoly::from_terms(p.terms().map(|(m, c)| {
        let mut out = Monomial::one();
        for (v, e) in m.iter() {
            match map.get(v) {
                Some(img) => out = out.mul(&img.pow(e)),
                None => out = out.mul(&Monomial::power(v.clone(), e)),
            }
        }
        (out, c.clone())
    }))
}

fn subs_poly(
    p: &LaurentPoly,
    map: &BTreeMap<Variable, Scalar>,
    powers: &mut BTreeMap<(Variable, i64), Scalar>,
) -> Result<Scalar, ScalarError> {
    let mut total = Scalar::zero();
    for (m, c) in p.terms() {
        let mut kept = Monomial::one();
        let mut t = Scalar::from_rational(c.clone());
        for (v, e) in m.iter() {
            match map.get(v) {
                Some(val) => {
                    let key = (v.clone(), e);
                    let pw = match powers.get(&key) {
                        Some(pw) => pw.clone(),
                        None => {
                            let pw = val.pow(e).map_err(|_| ScalarError::DenominatorVanishes)?;
                            powers.insert(key, pw.clone());
                            pw
                        }
                    };
                    t = t.mul_ref(&pw);
                }
                None => kept = kept.mul(&Monomial::power(v.clone(), e)),
            }
        }
        total = total.add_ref(&t.mul_ref(&Scalar::monomial(kept)));
    }
    Ok(total)
}

/// Brings `num / den` (with `den` nonzero) into canonical form.
/// Removes the common factor of `num` and the denominator polynomial `den`,
/// returning the reduced pair.
fn cancel(num: LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    if den.is_constant() {
        return (num, den.clone());
    }
    let nm = num.monomial_content();
    let stripped = num.mul_monomial(&nm.inv());
    let g = gcd(&stripped, den);
    if g.is_one() {
        return (num, den.clone());
    }
    let n = div_exact(&stripped, &g).expect("gcd divides numerator");
    let d = div_exact(den, &g).expect("gcd divides denominator");
    (n.mul_monomial(&nm), d)
}

/// Builds a scalar from a coprime pair whose denominator is a polynomial
/// without monomial factor.
fn finish(num: LaurentPoly, den: LaurentPoly) -> Scalar {
    if let Some(c) = den.constant_value() {
        return Scalar::from_poly(num.scale(&c.recip()));
    }
    let lc = den.leading_coefficient();
    if lc.is_one() {
        Scalar { num, den }
    } else {
        let r = lc.recip();
        Scalar {
            num: num.scale(&r),
            den: den.scale(&r),
        }
    }
}

fn normalize(num: LaurentPoly, den: LaurentPoly) -> Scalar {
    if num.is_zero() {
        return Scalar::zero();
    }
    let dm = den.monomial_content();
    let dm_inv = dm.inv();
    let den = den.mul_monomial(&dm_inv);
    let num = num.mul_monomial(&dm_inv);
    if let Some(c) = den.constant_value() {
        return Scalar::from_poly(num.scale(&c.recip()));
    }
    let nm = num.monomial_content();
    let mut n = num.mul_monomial(&nm.inv());
    let mut d = den;
    let g = gcd(&n, &d);
    if !g.is_one() {
        n = div_exact(&n, &g).expect("gcd divides numerator");
        d = div_exact(&d, &g).expect("gcd divides denominator");
    }
    let lc = d.leading_coefficient();
    if !lc.is_one() {
        let r = lc.recip();
        n = n.scale(&r);
        d = d.scale(&r);
    }
    let n = n.mul_monomial(&nm);
    if d.is_one() {
        Scalar::from_poly(n)
    } else {
        Scalar { num: n, den: d }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Variable> for Scalar {
    fn from(v: Variable) -> Self {
        Scalar::var(v)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(c: BigRational) -> Self {
        Scalar::from_rational(c)
    }
}

impl From<Monomial> for Scalar {
    fn from(m: Monomial) -> Self {
        Scalar::monomial(m)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.add_ref(&rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.sub_ref(&rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.mul_ref(&rhs)
    }
}

/// # Panics
/// Panics on division by zero; use [`Scalar::div_ref`] to handle it.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.div_ref(&rhs).expect("division by zero scalar")
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.add_ref(rhs)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.sub_ref(rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}
