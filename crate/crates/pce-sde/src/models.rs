//! Model parameter sets and the closed-form laws of their terminal values.
//!
//! Three one-dimensional diffusions are supported, each with a known
//! distribution at the horizon `T`:
//!
//! * geometric Brownian motion `dS = rS dt + σS dW` — lognormal;
//! * Vasicek `dR = (α − βR) dt + σ dW` — Gaussian;
//! * CIR `dR = (α − βR) dt + σ√R dW` — scaled noncentral chi-squared with
//!   `c_T = 4β/(σ²(1−e^{−βT}))`, `q = 4α/σ²`, `λ_T = c_T·r0·e^{−βT}`.
//!
//! The module also provides the special functions these laws require
//! (log-gamma, regularized incomplete gamma, the normal CDF and its inverse,
//! and the noncentral chi-squared CDF/PDF), implemented from scratch so the
//! whole crate is deterministic and dependency-light.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, SQRT_2};
use thiserror::Error;

/// A fully parameterized model, including the horizon (years).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    /// Geometric Brownian motion `dS = rS dt + σS dW`, `S_0 = s0`.
    Gbm {
        /// Initial level.
        s0: f64,
        /// Drift rate per year.
        r: f64,
        /// Volatility per √year.
        sigma: f64,
        /// Horizon T in years.
        horizon: f64,
    },
    /// Vasicek `dR = (α − βR) dt + σ dW`, `R_0 = r0`.
    Vasicek {
        /// Initial level.
        r0: f64,
        /// Drift level per year.
        alpha: f64,
        /// Mean-reversion speed per year.
        beta: f64,
        /// Volatility per √year.
        sigma: f64,
        /// Horizon T in years.
        horizon: f64,
    },
    /// CIR `dR = (α − βR) dt + σ√R dW`, `R_0 = r0`.
    Cir {
        /// Initial level.
        r0: f64,
        /// Drift level per year.
        alpha: f64,
        /// Mean-reversion speed per year.
        beta: f64,
        /// Volatility per √year.
        sigma: f64,
        /// Horizon T in years.
        horizon: f64,
    },
}

/// Parameter validation failures.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    /// A parameter violates the model's domain.
    #[error("invalid {model} parameter: {reason}")]
    InvalidParameter {
        /// Model name.
        model: &'static str,
        /// What went wrong.
        reason: String,
    },
    /// β = 0 makes the mean-reversion formulas singular; the limit is not
    /// provided, so the value is rejected rather than silently patched.
    #[error("beta = 0 is singular for {model}: the closed-form statistics divide by beta")]
    SingularBeta {
        /// Model name.
        model: &'static str,
    },
}

impl ModelSpec {
    /// Short lowercase model name ("gbm", "vasicek", "cir").
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Gbm { .. } => "gbm",
            ModelSpec::Vasicek { .. } => "vasicek",
            ModelSpec::Cir { .. } => "cir",
        }
    }

    /// Volatility parameter σ.
    pub fn sigma(&self) -> f64 {
        match *self {
            ModelSpec::Gbm { sigma, .. }
            | ModelSpec::Vasicek { sigma, .. }
            | ModelSpec::Cir { sigma, .. } => sigma,
        }
    }

    /// Horizon T in years.
    pub fn horizon(&self) -> f64 {
        match *self {
            ModelSpec::Gbm { horizon, .. }
            | ModelSpec::Vasicek { horizon, .. }
            | ModelSpec::Cir { horizon, .. } => horizon,
        }
    }

    /// Initial level (`s0` or `r0`).
    pub fn initial_level(&self) -> f64 {
        match *self {
            ModelSpec::Gbm { s0, .. } => s0,
            ModelSpec::Vasicek { r0, .. } | ModelSpec::Cir { r0, .. } => r0,
        }
    }

    /// For CIR, whether zero is unattainable for the transformed process:
    /// true when `4α/σ² ≥ 2`. `None` for the other models.
    pub fn cir_zero_unattainable(&self) -> Option<bool> {
        match *self {
            ModelSpec::Cir { alpha, sigma, .. } => Some(4.0 * alpha / (sigma * sigma) >= 2.0),
            _ => None,
        }
    }

    /// Check all parameter-domain invariants.
    pub fn validate(&self) -> Result<(), ModelError> {
        let name = self.name();
        let invalid = |reason: String| ModelError::InvalidParameter {
            model: name,
            reason,
        };
        let positive = |value: f64, label: &str| -> Result<(), ModelError> {
            if !value.is_finite() || value <= 0.0 {
                Err(invalid(format!(
                    "{label} must be finite and positive, got {value}"
                )))
            } else {
                Ok(())
            }
        };
        positive(self.sigma(), "sigma")?;
        positive(self.horizon(), "horizon")?;
        positive(self.initial_level(), "initial level")?;
        match *self {
            ModelSpec::Gbm { r, .. } => {
                if !r.is_finite() {
                    return Err(invalid(format!("r must be finite, got {r}")));
                }
            }
            ModelSpec::Vasicek { alpha, beta, .. } | ModelSpec::Cir { alpha, beta, .. } => {
                positive(alpha, "alpha")?;
                if beta == 0.0 {
                    return Err(ModelError::SingularBeta { model: name });
                }
                positive(beta, "beta")?;
            }
        }
        Ok(())
    }
}

/// Closed-form law of the terminal value, stored by its natural parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticLaw {
    /// `ln X ~ N(log_mean, log_sd²)`.
    LogNormal {
        /// Mean of the log.
        log_mean: f64,
        /// Standard deviation of the log.
        log_sd: f64,
    },
    /// `X ~ N(mean, variance)`.
    Normal {
        /// Mean.
        mean: f64,
        /// Variance.
        variance: f64,
    },
    /// `scale·X ~ χ²(dof, noncentrality)`.
    ScaledNoncentralChiSquared {
        /// Scale factor c applied to the level.
        scale: f64,
        /// Degrees of freedom q.
        dof: f64,
        /// Noncentrality λ.
        noncentrality: f64,
    },
}

impl AnalyticLaw {
    /// Exact mean.
    pub fn mean(&self) -> f64 {
        match *self {
            AnalyticLaw::LogNormal { log_mean, log_sd } => (log_mean + 0.5 * log_sd * log_sd).exp(),
            AnalyticLaw::Normal { mean, .. } => mean,
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof,
                noncentrality,
            } => (dof + noncentrality) / scale,
        }
    }

    /// Exact variance.
    pub fn variance(&self) -> f64 {
        match *self {
            AnalyticLaw::LogNormal { log_mean, log_sd } => {
                let s2 = log_sd * log_sd;
                (s2.exp() - 1.0) * (2.0 * log_mean + s2).exp()
            }
            AnalyticLaw::Normal { variance, .. } => variance,
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof,
                noncentrality,
            } => 2.0 * (dof + 2.0 * noncentrality) / (scale * scale),
        }
    }

    /// Cumulative distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            AnalyticLaw::LogNormal { log_mean, log_sd } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal_cdf((x.ln() - log_mean) / log_sd)
                }
            }
            AnalyticLaw::Normal { mean, variance } => normal_cdf((x - mean) / variance.sqrt()),
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof,
                noncentrality,
            } => noncentral_chi2_cdf(scale * x, dof, noncentrality),
        }
    }

    /// Probability density function.
    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            AnalyticLaw::LogNormal { log_mean, log_sd } => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal_pdf((x.ln() - log_mean) / log_sd) / (x * log_sd)
                }
            }
            AnalyticLaw::Normal { mean, variance } => {
                let sd = variance.sqrt();
                normal_pdf((x - mean) / sd) / sd
            }
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof,
                noncentrality,
            } => scale * noncentral_chi2_pdf(scale * x, dof, noncentrality),
        }
    }

    /// Quantile function; `gamma` must lie strictly inside (0, 1).
    pub fn quantile(&self, gamma: f64) -> f64 {
        assert!(
            gamma > 0.0 && gamma < 1.0,
            "quantile level must lie in (0,1), got {gamma}"
        );
        match *self {
            AnalyticLaw::LogNormal { log_mean, log_sd } => {
                (log_mean + log_sd * normal_cdf_inv(gamma)).exp()
            }
            AnalyticLaw::Normal { mean, variance } => {
                mean + variance.sqrt() * normal_cdf_inv(gamma)
            }
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof,
                noncentrality,
            } => noncentral_chi2_quantile(gamma, dof, noncentrality) / scale,
        }
    }
}

/// Build the terminal law for a validated model.
pub fn analytic_law(model: &ModelSpec) -> Result<AnalyticLaw, ModelError> {
    model.validate()?;
    Ok(match *model {
        ModelSpec::Gbm {
            s0,
            r,
            sigma,
            horizon,
        } => AnalyticLaw::LogNormal {
            log_mean: s0.ln() + (r - 0.5 * sigma * sigma) * horizon,
            log_sd: sigma * horizon.sqrt(),
        },
        ModelSpec::Vasicek {
            r0,
            alpha,
            beta,
            sigma,
            horizon,
        } => {
            let decay = (-beta * horizon).exp();
            AnalyticLaw::Normal {
                mean: r0 * decay + alpha / beta * (1.0 - decay),
                variance: sigma * sigma / (2.0 * beta) * (1.0 - (-2.0 * beta * horizon).exp()),
            }
        }
        ModelSpec::Cir {
            r0,
            alpha,
            beta,
            sigma,
            horizon,
        } => {
            let decay = (-beta * horizon).exp();
            let scale = 4.0 * beta / (sigma * sigma * (1.0 - decay));
            AnalyticLaw::ScaledNoncentralChiSquared {
                scale,
                dof: 4.0 * alpha / (sigma * sigma),
                noncentrality: scale * r0 * decay,
            }
        }
    })
}

// --- special functions -------------------------------------------------------

/// Lanczos approximation of ln Γ(x); relative accuracy ≈ 1e-13, ample for the
/// 1e-9 targets downstream.
fn lgamma(x: f64) -> f64 {
    // Published coefficients kept verbatim even where they exceed f64 precision.
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection Γ(x)Γ(1−x) = π / sin(πx).
        return PI.ln() - (PI * x).sin().abs().ln() - lgamma(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + 7.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Series expansion of the regularized lower incomplete gamma P(a, x),
/// valid for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut term = sum;
    for _ in 0..100_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - lgamma(a)).exp()
}

/// Lentz continued fraction for the regularized upper incomplete gamma
/// Q(a, x), valid for x ≥ a + 1.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - lgamma(a)).exp() * h
}

/// Regularized lower incomplete gamma P(a, x).
fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_p requires a > 0, x >= 0");
    if x == 0.0 {
        0.0
    } else if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_cf(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x), computed on the
/// branch that keeps relative accuracy in the tail.
fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_q requires a > 0, x >= 0");
    if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Complementary error function, accurate in both tails.
fn erfc(y: f64) -> f64 {
    if y < 0.0 {
        2.0 - erfc(-y)
    } else if y == 0.0 {
        1.0
    } else {
        gamma_q(0.5, y * y)
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF via the complementary error function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

// Rational approximation (central region / tails) for the normal quantile,
// refined below by one Halley step to push the error well under 1e-9.
// Published coefficients kept verbatim even where they exceed f64 precision.
#[allow(clippy::excessive_precision)]
const INV_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_690e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const INV_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const INV_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const INV_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

/// Standard normal quantile; absolute error below 1e-9 on [1e-12, 1−1e-12].
///
/// Panics if `u` lies outside the open interval (0, 1).
pub fn normal_cdf_inv(u: f64) -> f64 {
    assert!(
        u > 0.0 && u < 1.0,
        "normal_cdf_inv requires 0 < u < 1, got {u}"
    );
    const P_LOW: f64 = 0.02425;
    let x = if u < P_LOW {
        let q = (-2.0 * u.ln()).sqrt();
        (((((INV_C[0] * q + INV_C[1]) * q + INV_C[2]) * q + INV_C[3]) * q + INV_C[4]) * q
            + INV_C[5])
            / ((((INV_D[0] * q + INV_D[1]) * q + INV_D[2]) * q + INV_D[3]) * q + 1.0)
    } else if u <= 1.0 - P_LOW {
        let q = u - 0.5;
        let r = q * q;
        (((((INV_A[0] * r + INV_A[1]) * r + INV_A[2]) * r + INV_A[3]) * r + INV_A[4]) * r
            + INV_A[5])
            * q
            / (((((INV_B[0] * r + INV_B[1]) * r + INV_B[2]) * r + INV_B[3]) * r + INV_B[4]) * r
                + 1.0)
    } else {
        let q = (-2.0 * (1.0 - u).ln()).sqrt();
        -(((((INV_C[0] * q + INV_C[1]) * q + INV_C[2]) * q + INV_C[3]) * q + INV_C[4]) * q
            + INV_C[5])
            / ((((INV_D[0] * q + INV_D[1]) * q + INV_D[2]) * q + INV_D[3]) * q + 1.0)
    };
    // One Halley step against the CDF above.
    let err = normal_cdf(x) - u;
    let step = err * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - step / (1.0 + 0.5 * x * step)
}

/// Poisson-mixture truncation threshold: stop once the accumulated Poisson
/// mass exceeds 1 − 1e-12.
const MIXTURE_MASS_EPS: f64 = 1e-12;

/// Noncentral chi-squared CDF with `dof` degrees of freedom and
/// noncentrality `lambda`, as the Poisson-weighted mixture of central
/// chi-squared CDFs.
///
/// The mixture is summed outward from the Poisson mode (seeded in log space,
/// so large noncentralities do not underflow) and truncated once the covered
/// Poisson mass exceeds 1 − 1e-12; absolute error ≤ 1e-9.
pub fn noncentral_chi2_cdf(x: f64, dof: f64, lambda: f64) -> f64 {
    assert!(dof > 0.0, "degrees of freedom must be positive, got {dof}");
    assert!(
        lambda >= 0.0,
        "noncentrality must be nonnegative, got {lambda}"
    );
    if x <= 0.0 {
        return 0.0;
    }
    if lambda == 0.0 {
        return gamma_p(0.5 * dof, 0.5 * x);
    }
    let h = 0.5 * lambda;
    let y = 0.5 * x;
    let k0 = h.floor() as u64;
    let a0 = 0.5 * dof + k0 as f64;
    let log_w0 = if k0 == 0 {
        -h
    } else {
        -h + k0 as f64 * h.ln() - lgamma(k0 as f64 + 1.0)
    };
    let w0 = log_w0.exp();
    let c0 = gamma_p(a0, y);
    // D_k = y^{a_k} e^{−y} / Γ(a_k+1) steps the central CDFs:
    //   P(a+1, y) = P(a, y) − D(a).
    let d0 = (a0 * y.ln() - y - lgamma(a0 + 1.0)).exp();
    let mut total = w0 * c0;
    let mut mass = w0;
    let (mut ku, mut au, mut wu, mut cu, mut du) = (k0, a0, w0, c0, d0);
    let mut up_alive = true;
    let (mut kd, mut ad, mut wd, mut cd, mut dd) = (k0, a0, w0, c0, d0);
    while mass < 1.0 - MIXTURE_MASS_EPS {
        let mut moved = false;
        if up_alive {
            ku += 1;
            au += 1.0;
            wu *= h / ku as f64;
            cu = (cu - du).max(0.0);
            du *= y / au;
            total += wu * cu;
            mass += wu;
            moved = true;
            if wu < f64::MIN_POSITIVE {
                up_alive = false;
            }
        }
        if kd > 0 {
            wd *= kd as f64 / h;
            dd *= ad / y;
            cd = (cd + dd).min(1.0);
            kd -= 1;
            ad -= 1.0;
            total += wd * cd;
            mass += wd;
            moved = true;
        }
        if !moved {
            break;
        }
    }
    total.clamp(0.0, 1.0)
}

/// Noncentral chi-squared density, by the same outward-summed Poisson mixture
/// over central chi-squared densities.
pub fn noncentral_chi2_pdf(x: f64, dof: f64, lambda: f64) -> f64 {
    assert!(dof > 0.0, "degrees of freedom must be positive, got {dof}");
    assert!(
        lambda >= 0.0,
        "noncentrality must be nonnegative, got {lambda}"
    );
    if x <= 0.0 {
        return 0.0;
    }
    let half_dof = 0.5 * dof;
    if lambda == 0.0 {
        return ((half_dof - 1.0) * x.ln() - 0.5 * x - half_dof * LN_2 - lgamma(half_dof)).exp();
    }
    let h = 0.5 * lambda;
    let y = 0.5 * x;
    let k0 = h.floor() as u64;
    let a0 = half_dof + k0 as f64;
    let log_w0 = if k0 == 0 {
        -h
    } else {
        -h + k0 as f64 * h.ln() - lgamma(k0 as f64 + 1.0)
    };
    let w0 = log_w0.exp();
    // Central chi-squared density with ν = dof + 2k at x; successive densities
    // obey f_{ν+2}(x) = f_ν(x)·x/ν, i.e. f_{k+1} = f_k·y/a_k.
    let f0 = ((a0 - 1.0) * x.ln() - y - a0 * LN_2 - lgamma(a0)).exp();
    let mut total = w0 * f0;
    let mut mass = w0;
    let (mut ku, mut au, mut wu, mut fu) = (k0, a0, w0, f0);
    let mut up_alive = true;
    let (mut kd, mut ad, mut wd, mut fd) = (k0, a0, w0, f0);
    while mass < 1.0 - MIXTURE_MASS_EPS {
        let mut moved = false;
        if up_alive {
            ku += 1;
            wu *= h / ku as f64;
            fu *= y / au;
            au += 1.0;
            total += wu * fu;
            mass += wu;
            moved = true;
            if wu < f64::MIN_POSITIVE {
                up_alive = false;
            }
        }
        if kd > 0 {
            wd *= kd as f64 / h;
            ad -= 1.0;
            fd *= ad / y;
            kd -= 1;
            total += wd * fd;
            mass += wd;
            moved = true;
        }
        if !moved {
            break;
        }
    }
    total.max(0.0)
}

/// Noncentral chi-squared quantile by bracketed bisection on
/// [0, mean + 20·stddev]; robust and called rarely.
pub fn noncentral_chi2_quantile(gamma: f64, dof: f64, lambda: f64) -> f64 {
    assert!(
        gamma > 0.0 && gamma < 1.0,
        "quantile level must lie in (0,1), got {gamma}"
    );
    let mean = dof + lambda;
    let sd = (2.0 * (dof + 2.0 * lambda)).sqrt();
    let mut lo = 0.0;
    let mut hi = mean + 20.0 * sd;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if noncentral_chi2_cdf(mid, dof, lambda) < gamma {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
