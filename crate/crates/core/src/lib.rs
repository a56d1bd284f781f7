//! Koszul cohomology of graded modules over prime fields, with plane-curve
//! models for line bundles on nodal curves and a suite of syzygy checks
//! around the gonality conjecture.

pub mod algebra;
pub mod curves;
pub mod error;
pub mod experiments;
pub mod koszul;
pub mod par;

pub use error::{Error, Result};
