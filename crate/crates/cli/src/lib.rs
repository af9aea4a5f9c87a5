//! Experiment drivers, file formats and the `dbc` command line for the
//! energy-space Dirichlet boundary control solver in `dbc-core`.

pub mod data;
pub mod experiments;
pub mod output;

pub use experiments::{run_experiment, ExperimentConfig, ExperimentError, ExperimentId, ExperimentReport};
