//! Exact integer lattice algebra: normal forms, basis completion, sublattices
//! and rational points of tori.

mod matrix;
mod normal_form;
mod sublattice;
mod torus;

use num_bigint::BigInt;
use thiserror::Error;

pub use matrix::{IntMatrix, UnimodularMatrix};
pub use normal_form::{complete_to_basis, extends_to_basis, hnf, snf, SmithDecomposition};
pub use sublattice::Sublattice;
pub use torus::{parse_rational, TorusPoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{rows} vectors cannot be part of a basis of Z^{dim}")]
    TooManyRows { rows: usize, dim: usize },
    #[error("vectors do not extend to a basis")]
    NotCompletable,
    #[error("sublattice is not saturated")]
    NotSaturated,
    #[error("matrix is not unimodular (determinant {determinant})")]
    NotUnimodular { determinant: BigInt },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("malformed rational `{0}`")]
    BadRational(String),
}

/// `true` iff `gcd` of the entries is 1.
pub fn is_primitive(v: &[BigInt]) -> bool {
    use num_integer::Integer;
    use num_traits::{One, Zero};
    v.iter()
        .fold(BigInt::zero(), |g, x| g.gcd(x))
        .is_one()
}
