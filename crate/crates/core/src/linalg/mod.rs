//! Exact linear algebra over the rationals and prime fields.

mod field;
mod intertwine;
mod matrix;
mod reduce;
mod sparse;

pub use field::{format_rational, parse_rational, sqrt_decimal, FieldSpec, Rational, Scalar};
pub use intertwine::{flatten_blocks, intertwiner_basis, Intertwining};
pub use matrix::{Matrix, SPARSE_DENSITY_THRESHOLD};
pub use sparse::SparseMatrix;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range")]
    ModulusTooLarge(u64),
    #[error("unknown field `{0}` (expected q, f2 or fp:<prime>)")]
    BadField(String),
    #[error("cannot parse `{0}` as a rational")]
    BadRational(String),
    #[error("{value} has a denominator divisible by {modulus}")]
    DenominatorVanishes { value: String, modulus: u64 },
    #[error("entry does not belong to field {0}")]
    FieldMismatch(FieldSpec),
    #[error("row of length {found}, expected {expected}")]
    Ragged { expected: usize, found: usize },
    #[error("incompatible shapes {left:?} and {right:?}")]
    ShapeMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not invertible")]
    NotInvertible,
}
