//! Desk-scale empirical checks: cycle structure of toy hashes and a
//! statistical battery.

pub mod cycle;
pub mod stats;

pub use cycle::{
    birthday_experiment, brent, detect_cycle, expected_cycle_length, random_starts,
    BirthdaySummary, CycleReport,
};
pub use stats::{battery, chi_square, monobit_z, serial, StatReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{test} needs at least {min} bytes, got {n}")]
    SampleTooSmall {
        test: &'static str,
        n: usize,
        min: usize,
    },
}
