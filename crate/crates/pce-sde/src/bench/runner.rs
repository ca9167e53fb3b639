//! Experiment runners: config in, tidy report out.
//!
//! Four runners cover the experiment shapes:
//!
//! * [`run_pce_convergence`] — degree sweep of one PCE method; per degree it
//!   emits absolute/relative moment errors against the analytic law plus
//!   99%/99.9% quantile errors from an LHS sample of 5000.
//! * [`run_comparison`] — two or more methods on the same model; elapsed
//!   times are normalized by the largest row so accuracy-vs-relative-time
//!   plots are hardware-independent.
//! * [`run_beta_sweep`] — Vasicek variance error across mean-reversion
//!   speeds, plus the fitted log-log slope.
//! * [`run_quantile_study`] — one LHS quantile estimate on a fixed expansion
//!   plus a repeated plain-Monte-Carlo reference whose spread gives the
//!   quantile's standard error.
//!
//! [`run_experiment`] dispatches on the method list. All randomness derives
//! from the config seed (or its CLI override), so reports are reproducible
//! byte-for-byte apart from timing columns.

use super::config::{fnv1a_hash, ExperimentConfig, MethodConfig, TolerancePreset};
use super::BenchError;
use crate::baselines::{
    mc_estimate_paths, mc_estimate_with, qmc_estimate_paths, qmc_estimate_with, PathScheme,
    TerminalMap,
};
use crate::models::{analytic_law, AnalyticLaw, ModelSpec};
use crate::nisp::{project_with_options, PceExpansion};
use crate::sampling::{
    draw_germ, repeated_quantile_se, sample_mean, sample_quantile, SamplingPlan,
};
use std::time::Instant;

/// Default path-step count when a baseline method needs paths but the config
/// does not pin one.
const DEFAULT_PATH_STEPS: usize = 200;

/// LHS sample size behind the per-degree quantile error columns.
const QUANTILE_SAMPLE_SIZE: usize = 5000;

/// Rows faster than this are re-timed (median of three) because a single
/// reading sits near timer resolution.
const MEDIAN_TIMING_FLOOR: f64 = 0.05;

/// CLI-level overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Replace the config seed.
    pub seed: Option<u64>,
    /// Force a quadrature node count for every projection.
    pub nodes: Option<usize>,
    /// Evaluate nodes/paths in parallel (bit-identical results).
    pub parallel: bool,
}

/// One observation: a (method, parameter, metric) triple with its value,
/// timing, and provenance columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Experiment name.
    pub experiment: String,
    /// Model name ("gbm", "vasicek", "cir").
    pub model: String,
    /// Model volatility σ.
    pub sigma: f64,
    /// Method label ("pce", "mc", "qmc", ...).
    pub method: String,
    /// Method parameter: degree p, sample size M, speed β, or level γ.
    pub param: f64,
    /// Metric name (see module docs of [`super::csv`]).
    pub metric: String,
    /// Metric value.
    pub value: f64,
    /// Elapsed seconds (possibly normalized; excluded from determinism).
    pub elapsed_s: f64,
    /// Seed the row's randomness derived from.
    pub seed: u64,
}

/// A full experiment result: rows plus provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    /// Experiment name (CSV file stem).
    pub name: String,
    /// All rows, in emission order.
    pub rows: Vec<ReportRow>,
    /// Effective seed (config seed unless overridden).
    pub seed: u64,
    /// FNV-1a hash of the canonical TOML serialization of the config.
    pub config_hash: u64,
    /// Tolerance presets used, joined with `+`, if any method has one.
    pub preset: Option<String>,
}

/// Shared row scaffolding: everything except (method, param, metric, value).
struct RowBuilder {
    experiment: String,
    model: String,
    sigma: f64,
    seed: u64,
}

impl RowBuilder {
    fn new(config: &ExperimentConfig, seed: u64) -> Self {
        RowBuilder {
            experiment: config.name.clone(),
            model: config.model.name().to_string(),
            sigma: config.model.sigma(),
            seed,
        }
    }

    fn row(&self, method: &str, param: f64, metric: &str, value: f64, elapsed_s: f64) -> ReportRow {
        ReportRow {
            experiment: self.experiment.clone(),
            model: self.model.clone(),
            sigma: self.sigma,
            method: method.to_string(),
            param,
            metric: metric.to_string(),
            value,
            elapsed_s,
            seed: self.seed,
        }
    }
}

fn effective_seed(config: &ExperimentConfig, options: &RunOptions) -> u64 {
    options.seed.unwrap_or(config.seed)
}

fn config_hash(config: &ExperimentConfig) -> u64 {
    let canonical = toml::to_string(config).expect("experiment configs serialize to TOML");
    fnv1a_hash(canonical.as_bytes())
}

fn preset_summary(config: &ExperimentConfig) -> Option<String> {
    let mut presets: Vec<TolerancePreset> = Vec::new();
    for method in &config.methods {
        let preset = match method {
            MethodConfig::Pce { tolerances, .. }
            | MethodConfig::QuantileStudy { tolerances, .. }
            | MethodConfig::BetaSweep { tolerances, .. } => Some(*tolerances),
            MethodConfig::Mc { .. } | MethodConfig::Qmc { .. } => None,
        };
        if let Some(p) = preset {
            if !presets.contains(&p) {
                presets.push(p);
            }
        }
    }
    if presets.is_empty() {
        None
    } else {
        Some(
            presets
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("+"),
        )
    }
}

/// Project and time the projection, re-running twice and taking the median
/// elapsed when the first reading is below the timing floor. The expansion is
/// identical across reruns, so only the clock is affected.
fn project_timed(
    model: &ModelSpec,
    degree: usize,
    nodes: Option<usize>,
    preset: TolerancePreset,
    parallel: bool,
) -> Result<(PceExpansion, f64), BenchError> {
    let tolerances = preset.tolerances();
    let expansion = project_with_options(model, degree, nodes, tolerances, parallel)?;
    let mut elapsed = expansion.node_eval_seconds + expansion.projection_seconds;
    if elapsed < MEDIAN_TIMING_FLOOR {
        let mut times = vec![elapsed];
        for _ in 0..2 {
            let rerun = project_with_options(model, degree, nodes, tolerances, parallel)?;
            times.push(rerun.node_eval_seconds + rerun.projection_seconds);
        }
        times.sort_by(f64::total_cmp);
        elapsed = times[1];
    }
    Ok((expansion, elapsed))
}

/// Median-of-three wrapper for any re-runnable estimate returning
/// `(deterministic value, elapsed)`.
fn median_timed<T>(mut run: impl FnMut() -> (T, f64)) -> (T, f64) {
    let (value, first) = run();
    if first >= MEDIAN_TIMING_FLOOR {
        return (value, first);
    }
    let (_, second) = run();
    let (_, third) = run();
    let mut times = [first, second, third];
    times.sort_by(f64::total_cmp);
    (value, times[1])
}

/// Strip a leading `0.` so γ=0.99 labels the metric `eps_q99`.
fn gamma_metric(gamma: f64) -> String {
    let text = format!("{gamma}");
    let digits = text.strip_prefix("0.").unwrap_or(&text);
    format!("eps_q{digits}")
}

fn moment_error_rows(
    builder: &RowBuilder,
    method: &str,
    param: f64,
    expansion: &PceExpansion,
    law: &AnalyticLaw,
    elapsed: f64,
) -> Vec<ReportRow> {
    let eps_mean = (expansion.mean() - law.mean()).abs();
    let eps_var = (expansion.variance() - law.variance()).abs();
    vec![
        builder.row(method, param, "eps_mean", eps_mean, elapsed),
        builder.row(method, param, "eps_var", eps_var, elapsed),
        builder.row(
            method,
            param,
            "re_mean",
            eps_mean / law.mean().abs(),
            elapsed,
        ),
        builder.row(method, param, "re_var", eps_var / law.variance(), elapsed),
    ]
}

/// Degree sweep of a single PCE method (see module docs).
pub fn run_pce_convergence(
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let (p_min, p_max, preset, config_nodes) = match config
        .methods
        .iter()
        .find(|m| matches!(m, MethodConfig::Pce { .. }))
    {
        Some(MethodConfig::Pce {
            p_min,
            p_max,
            tolerances,
            nodes,
        }) => (*p_min, *p_max, *tolerances, *nodes),
        _ => {
            return Err(BenchError::InvalidConfig {
                reason: "convergence run needs a [[method]] with kind = \"pce\"".into(),
            })
        }
    };
    let seed = effective_seed(config, options);
    let nodes = options.nodes.or(config_nodes);
    let builder = RowBuilder::new(config, seed);
    let law = analytic_law(&config.model)?;
    let gammas = [0.99, 0.999];
    let reference_quantiles: Vec<f64> = gammas.iter().map(|&g| law.quantile(g)).collect();

    let mut rows = Vec::new();
    for degree in p_min..=p_max {
        let param = degree as f64;
        match project_timed(&config.model, degree, nodes, preset, options.parallel) {
            Ok((expansion, elapsed)) => {
                rows.extend(moment_error_rows(
                    &builder, "pce", param, &expansion, &law, elapsed,
                ));
                let sample =
                    expansion.sample(&SamplingPlan::latin_hypercube(QUANTILE_SAMPLE_SIZE, seed));
                for (&gamma, &reference) in gammas.iter().zip(&reference_quantiles) {
                    let estimate = sample_quantile(&sample, gamma);
                    rows.push(builder.row(
                        "pce",
                        param,
                        &gamma_metric(gamma),
                        (estimate.value - reference).abs(),
                        elapsed,
                    ));
                }
            }
            // A failed projection is recorded and the sweep continues.
            Err(error) => {
                rows.push(builder.row("pce", param, "failed", 1.0, 0.0));
                eprintln!("degree {degree}: projection failed: {error}");
            }
        }
    }
    Ok(ExperimentReport {
        name: config.name.clone(),
        rows,
        seed,
        config_hash: config_hash(config),
        preset: preset_summary(config),
    })
}

/// Whether a baseline method should simulate paths for this model, and with
/// how many steps.
fn path_steps(model: &ModelSpec, steps: Option<usize>) -> Option<usize> {
    match (model, steps) {
        (_, Some(l)) => Some(l),
        (ModelSpec::Cir { .. }, None) => Some(DEFAULT_PATH_STEPS),
        _ => None,
    }
}

fn mc_rows(
    builder: &RowBuilder,
    config: &ExperimentConfig,
    law: &AnalyticLaw,
    seed: u64,
    powers: (u32, u32),
    steps: Option<usize>,
    parallel: bool,
) -> Result<Vec<ReportRow>, BenchError> {
    let mut rows = Vec::new();
    for power in powers.0..=powers.1 {
        let size = 1usize << power;
        // Independent stream per sample size, derived from the base seed.
        let row_seed = seed.wrapping_add(u64::from(power));
        let param = size as f64;
        let ((stats, reflections), elapsed) = match path_steps(&config.model, steps) {
            Some(l) => {
                let scheme = PathScheme::for_model(config.model, l);
                median_timed(|| {
                    let (stats, reflections) = mc_estimate_paths(&scheme, size, row_seed, parallel);
                    ((stats, reflections), stats.elapsed_seconds)
                })
            }
            None => {
                let map = TerminalMap::from_law(law).expect("non-CIR laws admit a one-draw map");
                median_timed(|| {
                    let stats = mc_estimate_with(|g| map.apply(g), size, row_seed, parallel);
                    ((stats, 0u64), stats.elapsed_seconds)
                })
            }
        };
        rows.push(builder.row("mc", param, "mean", stats.mean, elapsed));
        rows.push(builder.row("mc", param, "variance", stats.variance, elapsed));
        rows.push(builder.row("mc", param, "se_mean", stats.se_mean, elapsed));
        rows.push(builder.row("mc", param, "se_variance", stats.se_variance, elapsed));
        rows.push(builder.row(
            "mc",
            param,
            "err_mean",
            (stats.mean - law.mean()).abs(),
            elapsed,
        ));
        rows.push(builder.row(
            "mc",
            param,
            "err_variance",
            (stats.variance - law.variance()).abs(),
            elapsed,
        ));
        if reflections > 0 {
            rows.push(builder.row("mc", param, "reflections", reflections as f64, elapsed));
        }
    }
    Ok(rows)
}

/// Time a QMC path estimate with the median-of-three rule, propagating Sobol
/// construction failures.
fn qmc_paths_timed(
    scheme: &PathScheme,
    size: usize,
    reference: Option<(f64, f64)>,
    parallel: bool,
) -> Result<((crate::baselines::QmcStatistics, u64), f64), BenchError> {
    let (stats, reflections) = qmc_estimate_paths(scheme, size, reference, parallel)?;
    let mut elapsed = stats.elapsed_seconds;
    if elapsed < MEDIAN_TIMING_FLOOR {
        let mut times = vec![elapsed];
        for _ in 0..2 {
            let (rerun, _) = qmc_estimate_paths(scheme, size, reference, parallel)?;
            times.push(rerun.elapsed_seconds);
        }
        times.sort_by(f64::total_cmp);
        elapsed = times[1];
    }
    Ok(((stats, reflections), elapsed))
}

fn qmc_rows(
    builder: &RowBuilder,
    config: &ExperimentConfig,
    law: &AnalyticLaw,
    powers: (u32, u32),
    steps: Option<usize>,
    parallel: bool,
) -> Result<Vec<ReportRow>, BenchError> {
    let reference = Some((law.mean(), law.variance()));
    let mut rows = Vec::new();
    for power in powers.0..=powers.1 {
        let size = 1usize << power;
        let param = size as f64;
        let ((stats, reflections), elapsed) = match path_steps(&config.model, steps) {
            Some(l) => {
                let scheme = PathScheme::for_model(config.model, l);
                qmc_paths_timed(&scheme, size, reference, parallel)?
            }
            None => {
                let map = TerminalMap::from_law(law).expect("non-CIR laws admit a one-draw map");
                median_timed(|| {
                    let stats = qmc_estimate_with(|g| map.apply(g), size, reference, parallel);
                    ((stats, 0u64), stats.elapsed_seconds)
                })
            }
        };
        rows.push(builder.row("qmc", param, "mean", stats.mean, elapsed));
        rows.push(builder.row("qmc", param, "variance", stats.variance, elapsed));
        rows.push(builder.row(
            "qmc",
            param,
            "err_mean",
            stats.err_mean.expect("reference supplied"),
            elapsed,
        ));
        rows.push(builder.row(
            "qmc",
            param,
            "err_variance",
            stats.err_variance.expect("reference supplied"),
            elapsed,
        ));
        if reflections > 0 {
            rows.push(builder.row("qmc", param, "reflections", reflections as f64, elapsed));
        }
    }
    Ok(rows)
}

/// Run every configured method on the shared model and normalize all elapsed
/// times by the maximum across rows.
pub fn run_comparison(
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    if config.methods.len() < 2 {
        return Err(BenchError::InvalidConfig {
            reason: "a comparison needs at least two [[method]] sections".into(),
        });
    }
    let seed = effective_seed(config, options);
    let builder = RowBuilder::new(config, seed);
    let law = analytic_law(&config.model)?;
    let mut rows = Vec::new();
    for method in &config.methods {
        match method {
            MethodConfig::Pce {
                p_min,
                p_max,
                tolerances,
                nodes,
            } => {
                let nodes = options.nodes.or(*nodes);
                for degree in *p_min..=*p_max {
                    match project_timed(&config.model, degree, nodes, *tolerances, options.parallel)
                    {
                        Ok((expansion, elapsed)) => rows.extend(moment_error_rows(
                            &builder,
                            "pce",
                            degree as f64,
                            &expansion,
                            &law,
                            elapsed,
                        )),
                        Err(error) => {
                            rows.push(builder.row("pce", degree as f64, "failed", 1.0, 0.0));
                            eprintln!("degree {degree}: projection failed: {error}");
                        }
                    }
                }
            }
            MethodConfig::Mc {
                m_min_power,
                m_max_power,
                steps,
            } => {
                rows.extend(mc_rows(
                    &builder,
                    config,
                    &law,
                    seed,
                    (*m_min_power, *m_max_power),
                    *steps,
                    options.parallel,
                )?);
            }
            MethodConfig::Qmc {
                m_min_power,
                m_max_power,
                steps,
            } => {
                rows.extend(qmc_rows(
                    &builder,
                    config,
                    &law,
                    (*m_min_power, *m_max_power),
                    *steps,
                    options.parallel,
                )?);
            }
            other => {
                return Err(BenchError::InvalidConfig {
                    reason: format!(
                        "method kind {:?} does not belong in a comparison",
                        other.label()
                    ),
                });
            }
        }
    }
    // Normalize times by the slowest row ("relative to the highest data").
    let max_elapsed = rows.iter().map(|r| r.elapsed_s).fold(0.0_f64, f64::max);
    if max_elapsed > 0.0 {
        for row in &mut rows {
            row.elapsed_s /= max_elapsed;
        }
    }
    Ok(ExperimentReport {
        name: config.name.clone(),
        rows,
        seed,
        config_hash: config_hash(config),
        preset: preset_summary(config),
    })
}

/// Variance error across a β grid at fixed degree, plus the fitted log-log
/// slope (emitted as method "beta-sweep", metric "slope", param 0).
pub fn run_beta_sweep(
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let (min_exp, max_exp, per_decade, degree, preset) = match config
        .methods
        .iter()
        .find(|m| matches!(m, MethodConfig::BetaSweep { .. }))
    {
        Some(MethodConfig::BetaSweep {
            beta_min_exponent,
            beta_max_exponent,
            steps_per_decade,
            degree,
            tolerances,
        }) => (
            *beta_min_exponent,
            *beta_max_exponent,
            *steps_per_decade,
            *degree,
            *tolerances,
        ),
        _ => {
            return Err(BenchError::InvalidConfig {
                reason: "beta sweep needs a [[method]] with kind = \"beta-sweep\"".into(),
            })
        }
    };
    let ModelSpec::Vasicek {
        r0,
        alpha,
        sigma,
        horizon,
        ..
    } = config.model
    else {
        return Err(BenchError::InvalidConfig {
            reason: "beta-sweep is defined for the Vasicek model only".into(),
        });
    };
    let seed = effective_seed(config, options);
    let builder = RowBuilder::new(config, seed);
    let nodes = options.nodes;

    let count = ((max_exp - min_exp) * f64::from(per_decade)).round() as usize + 1;
    let mut rows = Vec::new();
    let mut fit_points = Vec::new();
    for k in 0..count {
        let exponent = min_exp + k as f64 / f64::from(per_decade);
        let beta = 10f64.powf(exponent);
        let swept = ModelSpec::Vasicek {
            r0,
            alpha,
            beta,
            sigma,
            horizon,
        };
        let law = analytic_law(&swept)?;
        let (expansion, elapsed) = project_timed(&swept, degree, nodes, preset, options.parallel)?;
        let eps_var = (expansion.variance() - law.variance()).abs();
        rows.push(builder.row("pce", beta, "eps_var", eps_var, elapsed));
        rows.push(builder.row("pce", beta, "re_var", eps_var / law.variance(), elapsed));
        fit_points.push((beta.ln(), eps_var.ln()));
    }
    let slope = least_squares_slope(&fit_points);
    rows.push(builder.row("beta-sweep", 0.0, "slope", slope, 0.0));
    Ok(ExperimentReport {
        name: config.name.clone(),
        rows,
        seed,
        config_hash: config_hash(config),
        preset: preset_summary(config),
    })
}

/// Ordinary least-squares slope of y on x.
fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    sxy / sxx
}

/// Quantile study on a fixed-degree expansion. Two halves per γ:
///
/// * the PCE estimate — one LHS sample of the expansion, the same estimator
///   the degree sweeps use — with its error against the analytic quantile;
/// * a plain Monte Carlo reference — `repeats` independent samples of the
///   analytical solution (through the expansion itself when the law has no
///   germ map, i.e. for CIR), whose spread yields the quantile's standard
///   error. This is the yardstick the PCE error is judged against.
pub fn run_quantile_study(
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let (gammas, sample_size, repeats, degree, preset) = match config
        .methods
        .iter()
        .find(|m| matches!(m, MethodConfig::QuantileStudy { .. }))
    {
        Some(MethodConfig::QuantileStudy {
            gammas,
            sample_size,
            repeats,
            degree,
            tolerances,
        }) => (gammas.clone(), *sample_size, *repeats, *degree, *tolerances),
        _ => {
            return Err(BenchError::InvalidConfig {
                reason: "quantile study needs a [[method]] with kind = \"quantile-study\"".into(),
            })
        }
    };
    let seed = effective_seed(config, options);
    let builder = RowBuilder::new(config, seed);
    let law = analytic_law(&config.model)?;
    let (expansion, project_elapsed) = project_timed(
        &config.model,
        degree,
        options.nodes,
        preset,
        options.parallel,
    )?;

    let clock = Instant::now();
    let lhs_sample = expansion.sample(&SamplingPlan::latin_hypercube(sample_size, seed));
    let pce_elapsed = project_elapsed + clock.elapsed().as_secs_f64();

    let map = TerminalMap::from_law(&law);
    let clock = Instant::now();
    let mut estimates: Vec<Vec<f64>> = vec![Vec::with_capacity(repeats); gammas.len()];
    for repeat in 1..=repeats {
        let plan = SamplingPlan::plain(sample_size, seed.wrapping_add(repeat as u64));
        let sample: Vec<f64> = match map {
            Some(map) => draw_germ(&plan)
                .iter()
                .map(|&germ| map.apply(germ))
                .collect(),
            None => expansion.sample(&plan),
        };
        for (slot, &gamma) in estimates.iter_mut().zip(&gammas) {
            slot.push(sample_quantile(&sample, gamma).value);
        }
    }
    let mc_elapsed = clock.elapsed().as_secs_f64();

    let mut rows = Vec::new();
    for (slot, &gamma) in estimates.iter().zip(&gammas) {
        let q_pce = sample_quantile(&lhs_sample, gamma).value;
        rows.push(builder.row("quantile-study", gamma, "q_pce", q_pce, pce_elapsed));
        rows.push(builder.row(
            "quantile-study",
            gamma,
            "eps_q",
            (q_pce - law.quantile(gamma)).abs(),
            pce_elapsed,
        ));
        rows.push(builder.row(
            "quantile-study",
            gamma,
            "q_mc_mean",
            sample_mean(slot),
            mc_elapsed,
        ));
        rows.push(builder.row(
            "quantile-study",
            gamma,
            "q_se",
            repeated_quantile_se(slot),
            mc_elapsed,
        ));
    }
    Ok(ExperimentReport {
        name: config.name.clone(),
        rows,
        seed,
        config_hash: config_hash(config),
        preset: preset_summary(config),
    })
}

/// Dispatch a config to the runner its method list calls for.
pub fn run_experiment(
    config: &ExperimentConfig,
    options: &RunOptions,
) -> Result<ExperimentReport, BenchError> {
    config.validate()?;
    let has = |probe: fn(&MethodConfig) -> bool| config.methods.iter().any(probe);
    if has(|m| matches!(m, MethodConfig::BetaSweep { .. })) {
        run_beta_sweep(config, options)
    } else if has(|m| matches!(m, MethodConfig::QuantileStudy { .. })) {
        run_quantile_study(config, options)
    } else if config.methods.len() == 1 && matches!(config.methods[0], MethodConfig::Pce { .. }) {
        run_pce_convergence(config, options)
    } else {
        run_comparison(config, options)
    }
}
