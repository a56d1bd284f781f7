//! Koszul complexes of graded modules.

pub mod betti;
pub mod complex;
pub mod module;
pub mod wedge;

pub use betti::{betti_table, betti_table_with, duality_gap, BettiCell, BettiTable, DualityHypotheses};
pub use complex::{build_differential, check_d_squared, euler_strand, koszul_dimension, KoszulComplex, RankCache, RankInfo};
pub use module::GradedModule;
pub use wedge::{binomial, WedgeBasis};
