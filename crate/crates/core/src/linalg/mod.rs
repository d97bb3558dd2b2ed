//! Exact rational linear algebra plus the float matrix exponential.

mod expm;
mod matrix;
mod operators;
mod poly;

pub use expm::{exp_and_phi, matrix_exp};
pub use matrix::{RatMatrix, Rref, SpanSolver};
pub use operators::{anticommutant, commutant_pairs, OperatorNullspace};
pub use poly::{charpoly, is_derogatory, minimal_polynomial, RatPoly, RationalRoot};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {} entries, found {found}", rows * cols)]
    EntryCount { rows: usize, cols: usize, found: usize },
}
