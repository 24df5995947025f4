//! Exact arithmetic in the fraction field of multivariate Laurent
//! polynomials with rational coefficients.

mod fraction;
pub mod gcd;
mod laurent;
mod monomial;
mod parse;

pub use fraction::Scalar;
pub use laurent::{EvalFailure, LaurentPoly};
pub use monomial::{is_valid_name, Monomial, Variable};
pub use parse::parse_scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("no value assigned to variable {0}")]
    MissingVariable(String),
    #[error("denominator vanishes at the given point")]
    DenominatorVanishes,
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s("q - q^-1") + s("q^-1"), s("q"));
        assert_eq!(s("a") + Scalar::zero(), s("a"));
        assert_eq!(s("1 - q^2") + s("q^2 - q^-2"), s("1 - q^-2"));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(s("-p*lam^-1") * s("-p^-1*lam"), Scalar::one());
        assert_eq!(s("q - q^-1") * s("q"), s("q^2 - 1"));
        assert_eq!(s("k_1") * s("k_1/k_2"), s("k_1^2*k_2^-1"));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(s("q").inv().unwrap(), s("q^-1"));
        assert_eq!(s("-p*lam^-1").inv().unwrap(), s("-p^-1*lam"));
        let v = s("q - q^-1").inv().unwrap();
        assert_eq!(v.to_string(), "q/(q^2 - 1)");
        assert_eq!(v * s("q - q^-1"), Scalar::one());
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::ZeroInverse));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("p_12*p_23").to_string(), "p_12*p_23");
        let xi = s("(1-q^2)*k_1/k_2");
        assert_eq!(xi, s("k_1*k_2^-1") - s("q^2*k_1*k_2^-1"));
        assert!(xi.is_laurent());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_scalar("q + * 2") {
            Err(ScalarError::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_scalar("(q"), Err(ScalarError::Parse { .. })));
        assert!(matches!(
            parse_scalar("q^x"),
            Err(ScalarError::Parse { .. })
        ));
        assert!(matches!(
            parse_scalar("1/0"),
            Err(ScalarError::Parse { .. })
        ));
        assert!(matches!(parse_scalar(""), Err(ScalarError::Parse { .. })));
        assert!(matches!(
            parse_scalar("q $"),
            Err(ScalarError::Parse { position: 2, .. })
        ));
    }

    #[test]
    fn substitute_examples() {
        let mut a = BTreeMap::new();
        a.insert(Variable::named("q"), rat(2, 1));
        assert_eq!(s("q - q^-1").substitute(&a).unwrap(), rat(3, 2));
        a.insert(Variable::named("q"), rat(1, 1));
        assert_eq!(s("q").substitute(&a).unwrap(), rat(1, 1));
        a.insert(Variable::named("p"), rat(1, 1));
        a.insert(Variable::named("lam"), rat(1, 1));
        assert_eq!(s("p*lam*(q - q^-1)").substitute(&a).unwrap(), rat(0, 1));
        assert_eq!(
            s("x").substitute(&a),
            Err(ScalarError::MissingVariable("x".into()))
        );
        assert_eq!(
            s("1/(q - 1)").substitute(&a),
            Err(ScalarError::DenominatorVanishes)
        );
    }

    #[test]
    fn canonical_fraction() {
        let a = s("(x^2 - y^2)/(x*y - y^2)");
        assert_eq!(a, s("(x + y)/y"));
        assert!(a.is_laurent());
        let b = s("(2*x + 2)/(4*x^2 - 4)");
        assert_eq!(b.to_string(), "1/2/(x - 1)");
        assert_eq!(s("1/2/(x - 1)"), b);
    }

    #[test]
    fn general_substitution() {
        let mut m = BTreeMap::new();
        m.insert(Variable::named("lam"), s("q^2*k_1/(q - q^-1)"));
        m.insert(Variable::named("p"), s("q^-1"));
        let v = s("p*lam*(q - q^-1)").subs(&m).unwrap();
        assert_eq!(v, s("q*k_1"));
    }

    #[test]
    fn printed_forms_round_trip() {
        for t in [
            "q",
            "-q^-1 + 3/2*x*y^-2",
            "(q^2 - 1)/(q^4 + q + 7)",
            "-2/3*a_1/(a_1*b - 1)",
            "0",
            "-7",
        ] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v, "{t}");
        }
    }
}
