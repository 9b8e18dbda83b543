//! Experiment orchestration for the fourth-order NLS spectral toolkit:
//! config ingestion, seeded initial data, experiment pipelines, and
//! deterministic JSON/CSV reporting.

pub mod config;
pub mod data;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use error::HarnessError;
pub use experiments::{run_experiment, ExperimentKind, ExperimentOutput};
pub use report::{emit, SeriesTable};
