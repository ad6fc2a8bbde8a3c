//! Experiment harness around `qsignal-core`: a registry of experiments,
//! configuration from flags or JSON, and JSON/CSV run manifests.

// `!(x > 0.0)` rejects NaN along with the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;
pub mod registry;

use std::time::Instant;

pub use config::{ExperimentConfig, OutputFormat, Overrides};
pub use error::CliError;
pub use manifest::{Expectation, Metric, RunManifest, Source};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "QSIGNAL_OUTPUT_DIR";

/// Runs one experiment. Failed expectations are recorded in the manifest;
/// the caller decides what to do with them.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let outcome = experiments::dispatch(config)?;
    RunManifest::new(config.clone(), outcome, start.elapsed().as_secs_f64())
}
