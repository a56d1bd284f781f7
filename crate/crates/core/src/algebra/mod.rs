//! Exact arithmetic over prime fields and sparse rank computation.

pub mod field;
pub mod rank;
pub mod sparse;
pub mod span;
pub mod upoly;

pub use field::{is_prime, next_prime, PrimeField};
pub use rank::{dense_kernel, dense_rank, kernel_basis, rank, rank_and_kernel, rank_and_kernel_with, rank_with, RankOptions};
pub use sparse::SparseMatrix;
pub use span::{coordinates_in_span, SpanSolver};
