//! Thin CLI over the experiment harness.
//!
//! ```text
//! pce-sde run <config> [--out DIR] [--seed N] [--nodes N] [--parallel]
//! pce-sde list-experiments
//! pce-sde plot <csv> --format svg
//! ```
//!
//! `run` accepts either a path to a TOML config or the name of an experiment
//! shipped inside the binary. Failures exit nonzero with one JSON error line
//! on stderr: `{"error":"..."}`.

use clap::{Parser, Subcommand};
use pce_sde::bench::{
    find_experiment, render_svg, run_experiment, write_csv_file, BenchError, ExperimentConfig,
    RunOptions, EXPERIMENTS,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pce-sde",
    version,
    about = "Chaos-expansion approximations of SDE terminal laws, with MC/QMC baselines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its CSV report.
    Run {
        /// Path to a TOML config, or the name of a shipped experiment.
        config: String,
        /// Directory the CSV report is written into.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Force a quadrature node count for every projection.
        #[arg(long)]
        nodes: Option<usize>,
        /// Evaluate quadrature nodes and sample paths in parallel
        /// (bit-identical results, fixed reduction order).
        #[arg(long)]
        parallel: bool,
    },
    /// List the experiment configs shipped inside the binary.
    ListExperiments,
    /// Render a report CSV to a static plot next to the input file.
    Plot {
        /// CSV file produced by `run`.
        csv: PathBuf,
        /// Output format; only "svg" is supported.
        #[arg(long, default_value = "svg")]
        format: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("{{\"error\":{}}}", json_string(&error.to_string()));
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            nodes,
            parallel,
        } => {
            let text = load_config_text(&config)?;
            let parsed = ExperimentConfig::from_toml(&text)?;
            let options = RunOptions {
                seed,
                nodes,
                parallel,
            };
            let report = run_experiment(&parsed, &options)?;
            let path = write_csv_file(&report, &out)?;
            let preset = report
                .preset
                .as_deref()
                .map(|p| format!(", preset {p}"))
                .unwrap_or_default();
            println!(
                "wrote {} ({} rows, seed {}, config fnv1a {:016x}{preset})",
                path.display(),
                report.rows.len(),
                report.seed,
                report.config_hash,
            );
            Ok(())
        }
        Command::ListExperiments => {
            for experiment in EXPERIMENTS {
                println!("{:<34} {}", experiment.name, experiment.summary);
            }
            Ok(())
        }
        Command::Plot { csv, format } => {
            if format != "svg" {
                return Err(BenchError::PlotFormat { format });
            }
            let text = std::fs::read_to_string(&csv)?;
            let title = csv
                .file_stem()
                .and_then(|stem| stem.to_str())
                .unwrap_or("report")
                .to_string();
            let svg = render_svg(&text, &title)?;
            let out_path = csv.with_extension("svg");
            std::fs::write(&out_path, svg)?;
            println!("wrote {}", out_path.display());
            Ok(())
        }
    }
}

/// Resolve `run`'s argument: an existing file wins, then the shipped set.
fn load_config_text(spec: &str) -> Result<String, BenchError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(std::fs::read_to_string(path)?);
    }
    match find_experiment(spec) {
        Some(experiment) => Ok(experiment.toml.to_string()),
        None => Err(BenchError::UnknownExperiment {
            name: spec.to_string(),
        }),
    }
}

/// Encode a string as a JSON string literal (quotes, escapes, control chars).
fn json_string(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = std::fmt::Write::write_fmt(&mut out, format_args!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
