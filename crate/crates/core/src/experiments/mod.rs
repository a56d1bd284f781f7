//! Checkable statements about syzygies of curves, run on explicit models
//! with agreement required across several primes.

pub mod checks;
pub mod consensus;
pub mod report;

pub use checks::{claimed_gonality, generic_gonality, pairs, syzygy_gonality, Check, RunContext, CHECK_NAMES};
pub use consensus::{consensus_run, run_entries, run_suite, suite_entries, ModelSource, SuiteEntry, SUITE_NAMES};
pub use report::{Cell, CheckReport, Expectation, Expected, Outcome, SuiteReport, Verdict};
