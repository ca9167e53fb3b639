//! CSV serialization of experiment reports.
//!
//! The schema is pinned:
//!
//! ```text
//! experiment,model,sigma,method,param,metric,value,elapsed_s,seed
//! ```
//!
//! Metric vocabulary by method:
//!
//! * `pce` — `eps_mean`, `eps_var`, `re_mean`, `re_var` (absolute/relative
//!   moment errors), `eps_q99`, `eps_q999` (quantile errors from an LHS
//!   sample), `failed` (projection failure marker).
//! * `mc` — `mean`, `variance`, `se_mean`, `se_variance`, `err_mean`,
//!   `err_variance`, `reflections` (CIR only, when > 0).
//! * `qmc` — `mean`, `variance`, `err_mean`, `err_variance`, `reflections`.
//! * `quantile-study` — `q_pce`, `eps_q` (LHS estimate and its error),
//!   `q_mc_mean`, `q_se` (plain-MC reference and its standard error), all
//!   with `param` = γ.
//! * `beta-sweep` — `slope` (fitted log-log order, `param` = 0).
//!
//! `value` uses fixed scientific notation and every other column a canonical
//! display form, so a rerun with the same seed reproduces the file
//! byte-identically except for `elapsed_s`.

use super::runner::ExperimentReport;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// The pinned header line.
pub const CSV_HEADER: &str = "experiment,model,sigma,method,param,metric,value,elapsed_s,seed";

/// Render a report to CSV text.
pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:.10e},{:.6},{}",
            row.experiment,
            row.model,
            row.sigma,
            row.method,
            row.param,
            row.metric,
            row.value,
            row.elapsed_s,
            row.seed
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Write `<dir>/<experiment name>.csv`, creating the directory if needed.
/// Returns the path written.
pub fn write_csv_file(report: &ExperimentReport, dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.csv", report.name));
    fs::write(&path, render_csv(report))?;
    Ok(path)
}

/// Drop the `elapsed_s` column from CSV text — the form compared in
/// determinism checks.
pub fn csv_without_timing(csv: &str) -> String {
    let mut out = String::with_capacity(csv.len());
    for line in csv.lines() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() == 9 {
            out.push_str(&fields[..7].join(","));
            out.push(',');
            out.push_str(fields[8]);
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    out
}
