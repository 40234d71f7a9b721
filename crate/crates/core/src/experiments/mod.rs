//! Benchmark cases, error measures and the run harness.

pub mod cases;
pub mod metrics;
pub mod runner;
pub mod zalesak;

pub use cases::{builtin_case, ExperimentCase, Metric, Reference, BUILTIN_CASES};
pub use metrics::{eoc, error_against_reference, error_max_in_time, l1_error};
pub use runner::{convergence_study, run_experiment, ErrorReport, RunOptions, RunOutput, StepRule};
pub use zalesak::zalesak_signed_distance;
