//! Driving the benchmark harness from library code.
//!
//! Everything the `pce-sde` binary does is available programmatically:
//! parse a declarative TOML config (your own, or one of the shipped set),
//! run it, and render the report as CSV and SVG. This example runs a small
//! custom comparison and prints where the artifacts went.
//!
//! Run with: cargo run --example benchmark_report

use pce_sde::bench::{
    render_csv, render_svg, run_experiment, ExperimentConfig, RunOptions, EXPERIMENTS,
};

const CONFIG: &str = r#"
name = "demo_comparison"
seed = 42

[model]
kind = "gbm"
s0 = 100.0
r = 0.03
sigma = 0.15
horizon = 1.0

[[method]]
kind = "pce"
p_min = 1
p_max = 8
tolerances = "tight"

[[method]]
kind = "mc"
m_min_power = 8
m_max_power = 12

[[method]]
kind = "qmc"
m_min_power = 8
m_max_power = 12
"#;

fn main() {
    println!(
        "{} configs ship inside the crate; the first few:",
        EXPERIMENTS.len()
    );
    for experiment in EXPERIMENTS.iter().take(4) {
        println!("  {:<34} {}", experiment.name, experiment.summary);
    }

    let config = ExperimentConfig::from_toml(CONFIG).unwrap();
    let report = run_experiment(&config, &RunOptions::default()).unwrap();
    println!(
        "\nran \"{}\": {} rows, seed {}, config hash {:016x}",
        report.name,
        report.rows.len(),
        report.seed,
        report.config_hash
    );

    // A few rows, already normalized to the slowest method run.
    println!(
        "\n{:>6} {:>7} {:>12} {:>14} {:>10}",
        "method", "param", "metric", "value", "rel time"
    );
    for row in report
        .rows
        .iter()
        .filter(|row| matches!(row.metric.as_str(), "eps_mean" | "err_mean" | "se_mean"))
        .take(12)
    {
        println!(
            "{:>6} {:>7} {:>12} {:>14.4e} {:>10.4}",
            row.method, row.param, row.metric, row.value, row.elapsed_s
        );
    }

    let dir = std::env::temp_dir().join("pce-sde-demo");
    std::fs::create_dir_all(&dir).unwrap();
    let csv = render_csv(&report);
    let csv_path = dir.join("demo_comparison.csv");
    std::fs::write(&csv_path, &csv).unwrap();
    let svg_path = dir.join("demo_comparison.svg");
    std::fs::write(&svg_path, render_svg(&csv, "demo_comparison").unwrap()).unwrap();
    println!("\nwrote {}", csv_path.display());
    println!(
        "wrote {} (semilog-y, since every series is an error metric)",
        svg_path.display()
    );
}
