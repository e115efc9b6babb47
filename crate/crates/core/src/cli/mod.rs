//! Batch front end: configuration parsing, experiments and output files.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{parse_config, RunConfig};
pub use experiments::{run, write_outputs};
pub use output::RunOutput;
