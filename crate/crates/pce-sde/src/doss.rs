//! Doss pathwise representation of the terminal SDE solution.
//!
//! Each supported model admits a closed-form flow map `H` with `H(x, 0) = x`
//! such that the solution factorizes as `X_t = H(D_t, W_t)`, where `W` is the
//! driving Brownian path and `D` solves a pathwise deterministic ODE. Along a
//! quadrature node the whole path is driven by a single germ value,
//! `W_t = √(2t)·ξ`, so the terminal value becomes a deterministic function
//! `M(ξ)` of the germ — one ODE solve per node.
//!
//! Sharing one germ across the path is a modeling approximation, not a bug:
//! for Vasicek the resulting terminal value `RR_T` stays Gaussian with the
//! same mean but a slightly smaller variance, and [`vasicek_rr_law`] ships
//! that closed form so the bias can be quantified exactly.
//!
//! The D-ODE is integrated in the substituted variable `u = √t` (with
//! `du/dt = 1/(2u)`), which removes the square-root kink of `W_t` at the left
//! endpoint; integration starts at `t = 1e-12` rather than 0, perturbing the
//! solution far below the solver tolerances.

use crate::models::{ModelError, ModelSpec};
use crate::ode::{integrate, OdeError, OdeProblem, OdeSolution, Tolerances};
use std::cell::Cell;
use std::f64::consts::SQRT_2;
use thiserror::Error;

/// Left endpoint of the pathwise integration (years).
const START_TIME: f64 = 1e-12;

/// CIR positivity floor: the Doss domain requires `H > 0`, and values below
/// this floor are treated as a violation rather than clamped.
const CIR_POSITIVITY_FLOOR: f64 = 1e-12;

/// Failures of the pathwise evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum DossError {
    /// Invalid model parameters.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The CIR transformed state left the positive half-line.
    #[error("CIR positivity violated at t={t:.6e}: H={h:.6e} left the Doss domain")]
    PositivityViolation {
        /// Time of the violation.
        t: f64,
        /// Offending flow value.
        h: f64,
    },
    /// The deterministic ODE solve failed.
    #[error(transparent)]
    Ode(#[from] OdeError),
    /// The operation is defined for Vasicek only.
    #[error("operation requires a Vasicek model, got {model}")]
    NotVasicek {
        /// Name of the offending model.
        model: &'static str,
    },
}

/// The per-model pieces of the representation: the flow map `H`, the D-ODE
/// right-hand side, and the output transform (CIR works on `Y = √R` and
/// squares the terminal value).
#[derive(Debug, Clone, Copy)]
pub struct DossFunctional {
    model: ModelSpec,
}

impl DossFunctional {
    /// Build the functional for a validated model.
    pub fn new(model: ModelSpec) -> Result<Self, DossError> {
        model.validate()?;
        Ok(DossFunctional { model })
    }

    /// The underlying model.
    pub fn model(&self) -> &ModelSpec {
        &self.model
    }

    /// Flow map `H(x, y)`; satisfies `H(x, 0) = x`.
    pub fn h(&self, x: f64, y: f64) -> f64 {
        match self.model {
            ModelSpec::Gbm { sigma, .. } => x * (sigma * y).exp(),
            ModelSpec::Vasicek { sigma, .. } => sigma * y + x,
            ModelSpec::Cir { sigma, .. } => 0.5 * sigma * y + x,
        }
    }

    /// D-ODE right-hand side at time `t` with state `d`, germ value `xi`.
    pub fn d_rhs(&self, t: f64, d: f64, xi: f64) -> Result<f64, DossError> {
        doss_rhs(&self.model, t, d, xi)
    }

    /// Map the terminal flow value to the solution value.
    pub fn transform_out(&self, v: f64) -> f64 {
        match self.model {
            ModelSpec::Cir { .. } => v * v,
            _ => v,
        }
    }

    /// Initial state of the D-ODE (`√r0` for CIR, the initial level otherwise).
    pub fn initial_state(&self) -> f64 {
        match self.model {
            ModelSpec::Cir { r0, .. } => r0.sqrt(),
            other => other.initial_level(),
        }
    }
}

/// Right-hand side given the Brownian value `w`; `Err` carries the offending
/// CIR flow value.
fn rhs_given_noise(model: &ModelSpec, w: f64, d: f64) -> Result<f64, f64> {
    match *model {
        ModelSpec::Gbm { r, sigma, .. } => {
            let h = d * (sigma * w).exp();
            Ok((-sigma * w).exp() * (r * h - 0.5 * sigma * sigma * h))
        }
        ModelSpec::Vasicek {
            alpha, beta, sigma, ..
        } => Ok(alpha - beta * (sigma * w + d)),
        ModelSpec::Cir {
            alpha, beta, sigma, ..
        } => {
            let h = 0.5 * sigma * w + d;
            if h < CIR_POSITIVITY_FLOOR {
                Err(h)
            } else {
                Ok((alpha - beta * h * h - 0.25 * sigma * sigma) / (2.0 * h))
            }
        }
    }
}

/// The pathwise D-ODE right-hand side with `W_t = √(2t)·ξ` substituted.
pub fn doss_rhs(model: &ModelSpec, t: f64, d: f64, xi: f64) -> Result<f64, DossError> {
    assert!(t >= 0.0, "time must be nonnegative, got {t}");
    let w = (2.0 * t).sqrt() * xi;
    rhs_given_noise(model, w, d).map_err(|h| DossError::PositivityViolation { t, h })
}

/// Evaluate the solution functional `M(ξ)`: integrate the D-ODE from 0 to T
/// along the node's path, apply `H` at the terminal Brownian value, and
/// transform out.
pub fn evaluate_solution_at_node(
    model: &ModelSpec,
    xi: f64,
    tolerances: Tolerances,
) -> Result<f64, DossError> {
    let functional = DossFunctional::new(*model)?;
    let horizon = model.horizon();
    let violation: Cell<Option<(f64, f64)>> = Cell::new(None);
    // In u = √t the path value is W = √2·u·ξ and dD/du = 2u·f(u², D).
    let rhs = |u: f64, d: f64| match rhs_given_noise(model, SQRT_2 * u * xi, d) {
        Ok(v) => 2.0 * u * v,
        Err(h) => {
            violation.set(Some((u * u, h)));
            f64::NAN
        }
    };
    let solution: OdeSolution = integrate(&OdeProblem {
        rhs,
        t0: START_TIME.sqrt(),
        t1: horizon.sqrt(),
        d0: functional.initial_state(),
        tolerances,
    })
    .map_err(|err| match violation.get() {
        Some((t, h)) => DossError::PositivityViolation { t, h },
        None => DossError::Ode(err),
    })?;
    let w_terminal = (2.0 * horizon).sqrt() * xi;
    Ok(functional.transform_out(functional.h(solution.final_state, w_terminal)))
}

/// Closed-form law of the single-germ Vasicek terminal value `RR_T`:
/// Gaussian with the model's exact mean and variance
/// `σ²(√T − β e^{−βT} ∫₀^T √s e^{βs} ds)²`.
///
/// Comparing this variance with the exact one quantifies the bias of the
/// shared-germ path construction.
pub fn vasicek_rr_law(model: &ModelSpec) -> Result<(f64, f64), DossError> {
    match *model {
        ModelSpec::Vasicek {
            r0,
            alpha,
            beta,
            sigma,
            horizon,
        } => {
            model.validate()?;
            let decay = (-beta * horizon).exp();
            let mean = r0 * decay + alpha / beta * (1.0 - decay);
            let slope = horizon.sqrt() - beta * decay * sqrt_exp_integral(beta, horizon);
            Ok((mean, sigma * sigma * slope * slope))
        }
        ref other => Err(DossError::NotVasicek {
            model: other.name(),
        }),
    }
}

/// `∫₀^T √s·e^{βs} ds` via the everywhere-convergent series
/// `Σ_k β^k T^{k+3/2} / (k!·(k+3/2))`, summed to machine precision
/// (well inside the 1e-10 requirement).
fn sqrt_exp_integral(beta: f64, horizon: f64) -> f64 {
    let mut term = horizon.powf(1.5) / 1.5;
    let mut sum = term;
    let mut k = 0.0;
    while k < 400.0 {
        term *= beta * horizon * (k + 1.5) / ((k + 1.0) * (k + 2.5));
        sum += term;
        k += 1.0;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum
}

#[cfg(test)]
// Reference values are quoted at full printed precision.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::models::analytic_law;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn gbm() -> ModelSpec {
        ModelSpec::Gbm {
            s0: 100.0,
            r: 0.03,
            sigma: 0.15,
            horizon: 1.0,
        }
    }

    fn vasicek(sigma: f64) -> ModelSpec {
        ModelSpec::Vasicek {
            r0: 110.0,
            alpha: 0.1,
            beta: 0.2,
            sigma,
            horizon: 1.0,
        }
    }

    fn cir(alpha: f64, sigma: f64) -> ModelSpec {
        ModelSpec::Cir {
            r0: 110.0,
            alpha,
            beta: 0.2,
            sigma,
            horizon: 2.0,
        }
    }

    #[test]
    fn rhs_collapses_at_zero_germ() {
        // W ≡ 0 collapses H to the state itself.
        let v = vasicek(0.15);
        assert_abs_diff_eq!(
            doss_rhs(&v, 0.37, 110.0, 0.0).unwrap(),
            0.1 - 0.2 * 110.0,
            epsilon = 1e-14
        );
        let g = gbm();
        assert_relative_eq!(
            doss_rhs(&g, 2.0, 100.0, 0.0).unwrap(),
            100.0 * (0.03 - 0.5 * 0.15 * 0.15),
            max_relative = 1e-14
        );
        let c = cir(0.005625, 0.15);
        let d0 = 110.0f64.sqrt();
        assert_relative_eq!(
            doss_rhs(&c, 1.0, d0, 0.0).unwrap(),
            (0.005625 - 0.2 * 110.0 - 0.25 * 0.15 * 0.15) / (2.0 * d0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn gbm_node_matches_closed_form() {
        // The exact map is s0·exp{(r−σ²/2)T + σ√(2T)ξ}.
        for &xi in &[-2.0, -1.0, 0.0, 1.0, 2.0] {
            let value = evaluate_solution_at_node(&gbm(), xi, Tolerances::TIGHT).unwrap();
            let exact = 100.0 * ((0.03 - 0.5 * 0.15 * 0.15) + 0.15 * 2.0f64.sqrt() * xi).exp();
            assert_relative_eq!(value, exact, max_relative = 5e-9);
        }
        let at_zero = evaluate_solution_at_node(&gbm(), 0.0, Tolerances::TIGHT).unwrap();
        assert_relative_eq!(at_zero, 101.892688505202614, max_relative = 1e-9);
        let at_one = evaluate_solution_at_node(&gbm(), 1.0, Tolerances::TIGHT).unwrap();
        assert_relative_eq!(at_one, 125.971062810834383, max_relative = 1e-9);
    }

    #[test]
    fn vasicek_node_matches_affine_closed_form() {
        // RR_T(ξ) = mean + σ√2·(√T − βe^{−βT}·∫₀^T √s e^{βs} ds)·ξ.
        let model = vasicek(0.15);
        let (mean, _) = vasicek_rr_law(&model).unwrap();
        let slope = 1.0 - 0.2 * (-0.2f64).exp() * sqrt_exp_integral(0.2, 1.0);
        for &xi in &[-2.0, -0.6, 0.0, 0.7, 2.0] {
            let value = evaluate_solution_at_node(&model, xi, Tolerances::TIGHT).unwrap();
            let exact = mean + 0.15 * SQRT_2 * slope * xi;
            assert_abs_diff_eq!(value, exact, epsilon = 1e-6);
        }
    }

    #[test]
    fn vasicek_zero_germ_hits_the_exact_mean() {
        // Same accuracy bar as the node-exactness claim for gBm (5e-9 rel).
        let model = vasicek(0.15);
        let value = evaluate_solution_at_node(&model, 0.0, Tolerances::TIGHT).unwrap();
        assert_relative_eq!(value, 90.151017462039007, max_relative = 5e-9);
    }

    #[test]
    fn vasicek_evaluation_is_affine_in_the_germ() {
        let model = vasicek(0.25);
        let lo = evaluate_solution_at_node(&model, -1.0, Tolerances::TIGHT).unwrap();
        let mid = evaluate_solution_at_node(&model, 0.0, Tolerances::TIGHT).unwrap();
        let hi = evaluate_solution_at_node(&model, 1.0, Tolerances::TIGHT).unwrap();
        assert_abs_diff_eq!(lo + hi - 2.0 * mid, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn tiny_horizon_returns_the_initial_level() {
        for model in [
            ModelSpec::Gbm {
                s0: 100.0,
                r: 0.03,
                sigma: 0.15,
                horizon: 1e-12,
            },
            ModelSpec::Vasicek {
                r0: 110.0,
                alpha: 0.1,
                beta: 0.2,
                sigma: 0.15,
                horizon: 1e-12,
            },
            ModelSpec::Cir {
                r0: 110.0,
                alpha: 0.005625,
                beta: 0.2,
                sigma: 0.15,
                horizon: 1e-12,
            },
        ] {
            let value = evaluate_solution_at_node(&model, 0.0, Tolerances::TIGHT).unwrap();
            assert_relative_eq!(value, model.initial_level(), max_relative = 1e-8);
        }
    }

    #[test]
    fn cir_grid_nodes_evaluate_without_positivity_violation() {
        use crate::chaos::quadrature_rule;
        let rule = quadrature_rule(16).unwrap();
        for model in [
            cir(0.016875, 0.15),
            cir(0.046875, 0.25),
            cir(0.0675, 0.30),
            cir(0.005625, 0.15),
        ] {
            for &xi in &rule.nodes {
                let value = evaluate_solution_at_node(&model, xi, Tolerances::STANDARD);
                assert!(value.is_ok(), "node ξ={xi} failed: {value:?}");
                assert!(value.unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn cir_rhs_signals_positivity_violation() {
        let model = cir(0.005625, 0.15);
        let err = doss_rhs(&model, 1.0, 1e-13, -5.0).unwrap_err();
        assert!(matches!(err, DossError::PositivityViolation { .. }));
    }

    #[test]
    fn sqrt_exp_integral_matches_reference() {
        assert_relative_eq!(
            sqrt_exp_integral(0.2, 1.0),
            0.752689792303238,
            max_relative = 1e-12
        );
        // β→0 limit is (2/3)T^{3/2}.
        assert_relative_eq!(
            sqrt_exp_integral(1e-14, 1.0),
            2.0 / 3.0,
            max_relative = 1e-10
        );
    }

    #[test]
    fn rr_law_matches_reference_values() {
        let model = vasicek(0.15);
        let (mean, variance) = vasicek_rr_law(&model).unwrap();
        let law = analytic_law(&model).unwrap();
        assert_relative_eq!(mean, law.mean(), max_relative = 1e-13);
        assert_relative_eq!(variance, 0.017295535443001, max_relative = 1e-10);
        let gap = (law.variance() - variance) / law.variance();
        assert_relative_eq!(gap, 0.067349464364, max_relative = 1e-9);
        assert_abs_diff_eq!(
            law.variance() - variance,
            1.248961967494e-3,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rr_variance_gap_is_sigma_independent() {
        let mut gaps = Vec::new();
        for &sigma in &[0.15, 0.25, 0.30] {
            let model = vasicek(sigma);
            let law = analytic_law(&model).unwrap();
            let (_, variance) = vasicek_rr_law(&model).unwrap();
            gaps.push((law.variance() - variance) / law.variance());
        }
        assert_relative_eq!(gaps[0], gaps[1], max_relative = 1e-12);
        assert_relative_eq!(gaps[1], gaps[2], max_relative = 1e-12);
    }

    #[test]
    fn rr_law_rejects_non_vasicek_models() {
        let err = vasicek_rr_law(&gbm()).unwrap_err();
        assert_eq!(err, DossError::NotVasicek { model: "gbm" });
    }

    #[test]
    fn small_beta_gap_obeys_the_first_order_bound() {
        // |Var[R_T] − Var[RR_T]| ≈ (1/3)σ²T²β for small β, under σ²T²β.
        let sigma = 0.15;
        for &beta in &[1e-5, 1e-4, 1e-3, 1e-2] {
            let model = ModelSpec::Vasicek {
                r0: 110.0,
                alpha: 0.1,
                beta,
                sigma,
                horizon: 1.0,
            };
            let law = analytic_law(&model).unwrap();
            let (_, variance) = vasicek_rr_law(&model).unwrap();
            let gap = (law.variance() - variance).abs();
            let bound = sigma * sigma * beta;
            assert!(gap <= bound, "beta={beta}: gap {gap} exceeds bound {bound}");
            assert_relative_eq!(gap, bound / 3.0, max_relative = 0.2);
        }
    }

    proptest! {
        #[test]
        fn flow_map_boundary_condition(x in 0.01f64..1_000.0, model_idx in 0usize..3) {
            let model = [gbm(), vasicek(0.25), cir(0.046875, 0.25)][model_idx];
            let functional = DossFunctional::new(model).unwrap();
            prop_assert!((functional.h(x, 0.0) - x).abs() <= 1e-12 * x);
        }

        #[test]
        fn gbm_evaluation_monotone_in_the_germ(xi in -2.0f64..1.9) {
            let lo = evaluate_solution_at_node(&gbm(), xi, Tolerances::STANDARD).unwrap();
            let hi = evaluate_solution_at_node(&gbm(), xi + 0.1, Tolerances::STANDARD).unwrap();
            prop_assert!(hi > lo);
        }
    }
}
