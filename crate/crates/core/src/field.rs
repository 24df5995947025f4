//! The exact scalar fields the algorithms are generic over.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// An exact field: equality is decidable and every nonzero element has an
/// inverse.
///
/// The by-reference helpers avoid the clones that the by-value operator
/// traits would force on large symbolic values.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + Send
    + Sync
{
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn try_inv(&self) -> Option<Self>;
    /// A rough size measure used to pick cheap pivots.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for Scalar {
    fn add_ref(&self, other: &Self) -> Self {
        Scalar::add_ref(self, other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Scalar::sub_ref(self, other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Scalar::mul_ref(self, other)
    }
    fn neg_ref(&self) -> Self {
        Scalar::neg_ref(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn weight(&self) -> usize {
        self.numerator().len() + self.denominator().len()
    }
}

impl Field for BigRational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn generic_axioms<T: Field>(a: &T, b: &T, c: &T) {
        assert_eq!(a.add_ref(b), b.add_ref(a));
        assert_eq!(a.mul_ref(b), b.mul_ref(a));
        assert_eq!(a.add_ref(b).add_ref(c), a.add_ref(&b.add_ref(c)));
        assert_eq!(a.mul_ref(b).mul_ref(c), a.mul_ref(&b.mul_ref(c)));
        assert_eq!(
            a.mul_ref(&b.add_ref(c)),
            a.mul_ref(b).add_ref(&a.mul_ref(c))
        );
        assert_eq!(a.sub_ref(a), T::zero());
        match a.try_inv() {
            Some(i) => assert_eq!(a.mul_ref(&i), T::one()),
            None => assert!(a.is_zero()),
        }
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        let var = prop::sample::select(vec!["q", "x", "y"]);
        let term = (-3i64..=3, var, -2i64..=2)
            .prop_map(|(c, v, e)| Scalar::from_integer(c) * Scalar::named(v).pow(e).unwrap());
        let poly = prop::collection::vec(term, 1..4)
            .prop_map(|ts| ts.into_iter().fold(Scalar::zero(), |a, t| a + t));
        (poly.clone(), poly).prop_map(|(n, d)| if d.is_zero() { n } else { n / d })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scalar_field_axioms(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
            generic_axioms(&a, &b, &c);
        }

        #[test]
        fn rational_field_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50) {
            let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
            generic_axioms(&r(a, b), &r(c, b + 1), &r(a + c, 7));
        }

        #[test]
        fn print_parse_round_trip(a in small_scalar()) {
            let back: Scalar = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn normalization_is_idempotent(a in small_scalar()) {
            let again = Scalar::from_fraction(a.numerator().clone(), a.denominator().clone()).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn substitution_is_a_ring_map(a in small_scalar(), b in small_scalar(),
                                      q in 2i64..9, x in 2i64..9, y in -9i64..-1) {
            use std::collections::BTreeMap;
            use crate::scalar::Variable;
            let mut pt = BTreeMap::new();
            pt.insert(Variable::named("q"), BigRational::new(q.into(), 3.into()));
            pt.insert(Variable::named("x"), BigRational::new(x.into(), 5.into()));
            pt.insert(Variable::named("y"), BigRational::new(y.into(), 7.into()));
            if let (Ok(va), Ok(vb)) = (a.substitute(&pt), b.substitute(&pt)) {
                if let Ok(vab) = (a.clone() * b.clone()).substitute(&pt) {
                    prop_assert_eq!(vab, &va * &vb);
                }
                if let Ok(s) = (a + b).substitute(&pt) {
                    prop_assert_eq!(s, va + vb);
                }
            }
        }
    }
}
