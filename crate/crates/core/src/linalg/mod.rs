//! Dense exact linear algebra.

mod echelon;
mod matrix;
mod subspace;

pub use echelon::{image, kernel, rank, row_reduce, row_reduce_vectors, solve, Echelon};
pub use matrix::{Matrix, Vector};
pub use subspace::{quotient, QuotientPresentation, Subspace};
