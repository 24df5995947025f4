//! Exact symbolic workbench for R-matrices and twisting cocycles.

pub mod families;
pub mod field;
pub mod lattice;
pub mod oracle;
pub mod scalar;
pub mod suite;
pub mod tensor;
pub mod twist;

pub use field::Field;
pub use scalar::{LaurentPoly, Monomial, Scalar, ScalarError, Variable};
pub use tensor::{mat_eq, LeggedMatrix, TensorError};

/// Arbitrary-precision rationals, the scalar field of numeric checks.
pub type Rational = num_rational::BigRational;

/// Matrices over the symbolic scalar field.
pub type Matrix = LeggedMatrix<Scalar>;

/// Matrices over the rationals, used by the numeric oracle.
pub type RationalMatrix = LeggedMatrix<Rational>;
