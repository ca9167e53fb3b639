//! Declarative experiment configuration.
//!
//! One TOML file describes one experiment: a name, a seed, a `[model]`
//! section, and one or more `[[method]]` sections. Example:
//!
//! ```toml
//! name = "gbm_sigma15_errors_standard"
//! seed = 20260815
//!
//! [model]
//! kind = "gbm"
//! s0 = 100.0
//! r = 0.03
//! sigma = 0.15
//! horizon = 1.0
//!
//! [[method]]
//! kind = "pce"
//! p_min = 1
//! p_max = 15
//! tolerances = "standard"
//! ```

use super::BenchError;
use crate::models::ModelSpec;
use crate::ode::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Named ODE tolerance presets selectable from config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TolerancePreset {
    /// Working accuracy: abs 1e-7, rel 1e-5.
    Standard,
    /// Near machine accuracy: abs 1e-15, rel 1e-10.
    Tight,
}

impl TolerancePreset {
    /// The concrete tolerance pair.
    pub fn tolerances(self) -> Tolerances {
        match self {
            TolerancePreset::Standard => Tolerances::STANDARD,
            TolerancePreset::Tight => Tolerances::TIGHT,
        }
    }
}

impl fmt::Display for TolerancePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TolerancePreset::Standard => write!(f, "standard"),
            TolerancePreset::Tight => write!(f, "tight"),
        }
    }
}

/// One method entry of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MethodConfig {
    /// Chaos-projection sweep over degrees `p_min..=p_max`.
    Pce {
        /// Smallest degree.
        p_min: usize,
        /// Largest degree.
        p_max: usize,
        /// ODE tolerance preset for the node evaluations.
        tolerances: TolerancePreset,
        /// Optional fixed quadrature size (default is p + 1 per degree).
        #[serde(default)]
        nodes: Option<usize>,
    },
    /// Plain Monte Carlo over sample sizes `2^m_min_power..=2^m_max_power`.
    Mc {
        /// Smallest power of two.
        m_min_power: u32,
        /// Largest power of two.
        m_max_power: u32,
        /// Path steps L; when set (or when the model is CIR) the estimator
        /// simulates paths instead of the exact one-draw map.
        #[serde(default)]
        steps: Option<usize>,
    },
    /// Sobol quasi-Monte Carlo over the same power-of-two grid.
    Qmc {
        /// Smallest power of two.
        m_min_power: u32,
        /// Largest power of two.
        m_max_power: u32,
        /// Path steps L (doubles as the Sobol dimension); same defaulting
        /// rule as MC.
        #[serde(default)]
        steps: Option<usize>,
    },
    /// Repeated-quantile study on a fixed-degree expansion.
    QuantileStudy {
        /// Quantile levels, each in (0, 1).
        gammas: Vec<f64>,
        /// LHS sample size per repeat.
        sample_size: usize,
        /// Number of repeats.
        repeats: usize,
        /// Expansion degree.
        degree: usize,
        /// ODE tolerance preset.
        tolerances: TolerancePreset,
    },
    /// Variance-error sweep over mean-reversion speeds β (Vasicek only).
    BetaSweep {
        /// log10 of the smallest β.
        beta_min_exponent: f64,
        /// log10 of the largest β.
        beta_max_exponent: f64,
        /// Grid points per decade (2 = half-decade steps).
        steps_per_decade: u32,
        /// Expansion degree.
        degree: usize,
        /// ODE tolerance preset.
        tolerances: TolerancePreset,
    },
}

impl MethodConfig {
    /// Short method label used in report rows.
    pub fn label(&self) -> &'static str {
        match self {
            MethodConfig::Pce { .. } => "pce",
            MethodConfig::Mc { .. } => "mc",
            MethodConfig::Qmc { .. } => "qmc",
            MethodConfig::QuantileStudy { .. } => "quantile-study",
            MethodConfig::BetaSweep { .. } => "beta-sweep",
        }
    }
}

/// A parsed experiment file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name; also the output CSV stem.
    pub name: String,
    /// Base seed for every random draw in the experiment.
    pub seed: u64,
    /// The model under study.
    pub model: ModelSpec,
    /// One or more methods to run.
    #[serde(rename = "method")]
    pub methods: Vec<MethodConfig>,
}

impl ExperimentConfig {
    /// Parse a TOML document and check all config invariants.
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Check ranges are nonempty, γ levels sit in (0,1), and the model is
    /// self-consistent.
    pub fn validate(&self) -> Result<(), BenchError> {
        let invalid = |reason: String| BenchError::InvalidConfig { reason };
        if self.name.is_empty() {
            return Err(invalid("experiment name is empty".into()));
        }
        if self.methods.is_empty() {
            return Err(invalid(
                "at least one [[method]] section is required".into(),
            ));
        }
        self.model.validate()?;
        for method in &self.methods {
            match method {
                MethodConfig::Pce { p_min, p_max, .. } => {
                    if p_min > p_max {
                        return Err(invalid(format!("empty degree range {p_min}..={p_max}")));
                    }
                }
                MethodConfig::Mc {
                    m_min_power,
                    m_max_power,
                    steps,
                }
                | MethodConfig::Qmc {
                    m_min_power,
                    m_max_power,
                    steps,
                } => {
                    if m_min_power > m_max_power {
                        return Err(invalid(format!(
                            "empty sample-size range 2^{m_min_power}..=2^{m_max_power}"
                        )));
                    }
                    if *m_max_power > 30 {
                        return Err(invalid(format!(
                            "2^{m_max_power} samples is beyond the intended grid (max 2^30)"
                        )));
                    }
                    if steps == &Some(0) {
                        return Err(invalid("steps must be at least 1".into()));
                    }
                }
                MethodConfig::QuantileStudy {
                    gammas,
                    sample_size,
                    repeats,
                    ..
                } => {
                    if gammas.is_empty() {
                        return Err(invalid("gammas list is empty".into()));
                    }
                    if let Some(&g) = gammas.iter().find(|g| !(0.0 < **g && **g < 1.0)) {
                        return Err(invalid(format!("gamma {g} is outside (0, 1)")));
                    }
                    if *sample_size < 2 {
                        return Err(invalid("sample_size must be at least 2".into()));
                    }
                    if *repeats < 2 {
                        return Err(invalid("repeats must be at least 2".into()));
                    }
                }
                MethodConfig::BetaSweep {
                    beta_min_exponent,
                    beta_max_exponent,
                    steps_per_decade,
                    ..
                } => {
                    if beta_min_exponent > beta_max_exponent {
                        return Err(invalid(format!(
                            "empty beta range 10^{beta_min_exponent}..10^{beta_max_exponent}"
                        )));
                    }
                    if *steps_per_decade == 0 {
                        return Err(invalid("steps_per_decade must be at least 1".into()));
                    }
                    if !matches!(self.model, ModelSpec::Vasicek { .. }) {
                        return Err(invalid(
                            "beta-sweep is defined for the Vasicek model only".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// 64-bit FNV-1a hash, used to fingerprint config file contents in report
/// metadata.
pub fn fnv1a_hash(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = OFFSET;
    for &byte in bytes {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(PRIME);
    }
    hash
}
