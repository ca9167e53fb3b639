//! Experiment harness: declarative configs, runners, CSV reports, SVG plots.
//!
//! An experiment is a TOML file naming a model and one or more methods (PCE
//! projection sweep, MC, QMC, quantile study, β-sweep). Runners turn a config
//! into an [`ExperimentReport`] — a tidy long-format table with one row per
//! (method, parameter, metric) — which serializes to a pinned CSV schema:
//!
//! ```text
//! experiment,model,sigma,method,param,metric,value,elapsed_s,seed
//! ```
//!
//! Reports are byte-identical across reruns with the same seed, except for
//! the `elapsed_s` timing column.

mod config;
mod csv;
mod experiments;
mod plot;
mod runner;

pub use config::{fnv1a_hash, ExperimentConfig, MethodConfig, TolerancePreset};
pub use csv::{csv_without_timing, render_csv, write_csv_file};
pub use experiments::{find_experiment, NamedExperiment, EXPERIMENTS};
pub use plot::render_svg;
pub use runner::{
    run_beta_sweep, run_comparison, run_experiment, run_pce_convergence, run_quantile_study,
    ExperimentReport, ReportRow, RunOptions,
};

use crate::baselines::BaselineError;
use crate::models::ModelError;
use crate::nisp::NispError;
use thiserror::Error;

/// Failures anywhere in the harness.
#[derive(Debug, Error)]
pub enum BenchError {
    /// The TOML text did not parse into an [`ExperimentConfig`].
    #[error("config parse error: {0}")]
    Config(#[from] toml::de::Error),
    /// The config parsed but violates an invariant (empty range, bad γ...).
    #[error("invalid experiment config: {reason}")]
    InvalidConfig {
        /// What was violated.
        reason: String,
    },
    /// A name passed to `run` matched neither a file nor a shipped config.
    #[error(
        "unknown experiment {name:?}: not a readable file, and `list-experiments` does not ship it"
    )]
    UnknownExperiment {
        /// The unmatched name.
        name: String,
    },
    /// Model parameters rejected by validation.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// Projection failure that could not be recorded as a failed row.
    #[error(transparent)]
    Nisp(#[from] NispError),
    /// Sobol/MC input construction failure.
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    /// Filesystem failure reading configs or writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// A CSV handed to the plotter did not match the report schema.
    #[error("csv parse error at line {line}: {reason}")]
    Csv {
        /// 1-based line number.
        line: usize,
        /// What went wrong.
        reason: String,
    },
    /// Unsupported plot output format.
    #[error("unsupported plot format {format:?}: only \"svg\" is available")]
    PlotFormat {
        /// The requested format.
        format: String,
    },
}
