//! Experiment configs shipped inside the binary.
//!
//! The canonical files live under `experiments/` at the repository root and
//! are embedded at compile time, so `pce-sde run <name>` works from any
//! working directory and `pce-sde list-experiments` always reflects the
//! shipped set.

/// One embedded experiment config.
#[derive(Debug, Clone, Copy)]
pub struct NamedExperiment {
    /// Config name (matches the `name` field inside the TOML).
    pub name: &'static str,
    /// The TOML text.
    pub toml: &'static str,
    /// One-line description for `list-experiments`.
    pub summary: &'static str,
}

macro_rules! shipped {
    ($name:literal, $summary:literal) => {
        NamedExperiment {
            name: $name,
            toml: include_str!(concat!("../../../../experiments/", $name, ".toml")),
            summary: $summary,
        }
    };
}

/// Every shipped experiment, in listing order.
pub const EXPERIMENTS: &[NamedExperiment] = &[
    shipped!(
        "gbm_sigma15_errors_standard",
        "gBm sigma=15%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "gbm_sigma15_errors_tight",
        "gBm sigma=15%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "gbm_sigma25_errors_standard",
        "gBm sigma=25%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "gbm_sigma25_errors_tight",
        "gBm sigma=25%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "gbm_sigma30_errors_standard",
        "gBm sigma=30%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "gbm_sigma30_errors_tight",
        "gBm sigma=30%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "vasicek_sigma15_errors_standard",
        "Vasicek sigma=15%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "vasicek_sigma15_errors_tight",
        "Vasicek sigma=15%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "vasicek_sigma25_errors_standard",
        "Vasicek sigma=25%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "vasicek_sigma25_errors_tight",
        "Vasicek sigma=25%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "vasicek_sigma30_errors_standard",
        "Vasicek sigma=30%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "vasicek_sigma30_errors_tight",
        "Vasicek sigma=30%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "cir_sigma15_errors_standard",
        "CIR sigma=15%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "cir_sigma15_errors_tight",
        "CIR sigma=15%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "cir_sigma25_errors_standard",
        "CIR sigma=25%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "cir_sigma25_errors_tight",
        "CIR sigma=25%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "cir_sigma30_errors_standard",
        "CIR sigma=30%: degree sweep of moment/quantile errors, standard tolerances"
    ),
    shipped!(
        "cir_sigma30_errors_tight",
        "CIR sigma=30%: degree sweep of moment/quantile errors, tight tolerances"
    ),
    shipped!(
        "gbm_sigma15_quantile_se",
        "gBm sigma=15%: repeated 99%/99.9% quantile estimates and their SE"
    ),
    shipped!(
        "vasicek_sigma15_quantile_se",
        "Vasicek sigma=15%: repeated 99%/99.9% quantile estimates and their SE"
    ),
    shipped!(
        "cir_sigma15_quantile_se",
        "CIR sigma=15%: repeated 99%/99.9% quantile estimates and their SE"
    ),
    shipped!(
        "gbm_comparison",
        "gBm sigma=15%: PCE vs MC vs Sobol QMC, accuracy against normalized time"
    ),
    shipped!(
        "vasicek_comparison",
        "Vasicek sigma=15%: PCE vs MC vs Sobol QMC, accuracy against normalized time"
    ),
    shipped!(
        "cir_comparison",
        "CIR sigma=15%, slow reversion: PCE vs path MC vs path QMC (L=200)"
    ),
    shipped!(
        "vasicek_beta_sweep",
        "Vasicek sigma=15%: variance error vs mean-reversion speed, fitted slope"
    ),
];

/// Look up a shipped experiment by name (a trailing `.toml` is tolerated).
pub fn find_experiment(name: &str) -> Option<&'static NamedExperiment> {
    let stem = name.strip_suffix(".toml").unwrap_or(name);
    EXPERIMENTS.iter().find(|e| e.name == stem)
}
