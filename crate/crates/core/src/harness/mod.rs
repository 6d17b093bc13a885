//! Random instance generation and experiment campaigns.

mod experiment;
mod generate;

pub use experiment::{run_experiment, write_csv, ExperimentConfig, ExperimentRow};
pub use generate::{generate_instance, DeadlinePolicy, PmfStyle};
