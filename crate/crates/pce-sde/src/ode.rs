//! Adaptive scalar ODE integration by step-doubling classical RK4.
//!
//! Each attempted step computes one full RK4 step and two half steps; the
//! Richardson estimate err ≈ |y_half − y_full| / 15 controls the local error
//! against abs_tol + rel_tol·|state|. Accepted steps propagate the two-half-step
//! value. Step sizes scale by 0.9·(tol/err)^(1/5), clamped to [0.2, 5.0], from
//! an initial step of (t1−t0)/100. The integrator is deterministic: the same
//! problem yields bit-identical results on every run.

use thiserror::Error;

/// Absolute/relative local error tolerances for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Absolute term of the per-step error bound.
    pub abs: f64,
    /// Relative term, scaled by the state magnitude.
    pub rel: f64,
}

impl Tolerances {
    /// Everyday preset: abs 1e-7, rel 1e-5.
    pub const STANDARD: Tolerances = Tolerances {
        abs: 1e-7,
        rel: 1e-5,
    };
    /// High-accuracy preset: abs 1e-15, rel 1e-10.
    pub const TIGHT: Tolerances = Tolerances {
        abs: 1e-15,
        rel: 1e-10,
    };
}

/// A scalar initial value problem d' = rhs(t, d) on [t0, t1].
pub struct OdeProblem<F: Fn(f64, f64) -> f64> {
    /// Right-hand side f(t, d).
    pub rhs: F,
    /// Left endpoint.
    pub t0: f64,
    /// Right endpoint (t1 ≥ t0).
    pub t1: f64,
    /// Initial state at t0.
    pub d0: f64,
    /// Local error control.
    pub tolerances: Tolerances,
}

/// Result of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSolution {
    /// State at t1.
    pub final_state: f64,
    /// Accepted steps.
    pub steps_taken: u64,
    /// Rejected step attempts.
    pub rejected_steps: u64,
}

/// Integration failures.
#[derive(Debug, Error, PartialEq)]
pub enum OdeError {
    /// The controller drove the step below 1e-14·(t1−t0): the problem is
    /// effectively singular or stiff beyond this method.
    #[error("step size underflow at t={t}: step {step} below 1e-14 of the span")]
    StepSizeUnderflow {
        /// Time at which the controller gave up.
        t: f64,
        /// Offending step size.
        step: f64,
    },
    /// The right-hand side returned NaN or infinity.
    #[error("right-hand side returned a non-finite value at t={t}")]
    NonFiniteRhs {
        /// Time of the offending evaluation.
        t: f64,
    },
}

const SAFETY: f64 = 0.9;
const SHRINK_FLOOR: f64 = 0.2;
const GROWTH_CAP: f64 = 5.0;

/// One classical RK4 step of size h from (t, y).
fn rk4_step<F: Fn(f64, f64) -> f64>(f: &F, t: f64, y: f64, h: f64) -> f64 {
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    let k4 = f(t + h, y + h * k3);
    y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Integrate the problem from t0 to t1.
///
/// A degenerate span (t1 ≤ t0) returns the initial state with zero steps.
pub fn integrate<F: Fn(f64, f64) -> f64>(problem: &OdeProblem<F>) -> Result<OdeSolution, OdeError> {
    let span = problem.t1 - problem.t0;
    if span <= 0.0 {
        return Ok(OdeSolution {
            final_state: problem.d0,
            steps_taken: 0,
            rejected_steps: 0,
        });
    }
    let f = &problem.rhs;
    let Tolerances { abs, rel } = problem.tolerances;
    let mut t = problem.t0;
    let mut y = problem.d0;
    let mut h = span / 100.0;
    let mut steps = 0u64;
    let mut rejects = 0u64;

    while t < problem.t1 {
        if h < 1e-14 * span {
            return Err(OdeError::StepSizeUnderflow { t, step: h });
        }
        h = h.min(problem.t1 - t);
        let full = rk4_step(f, t, y, h);
        let mid = rk4_step(f, t, y, 0.5 * h);
        let halves = rk4_step(f, t + 0.5 * h, mid, 0.5 * h);
        if !halves.is_finite() || !full.is_finite() {
            return Err(OdeError::NonFiniteRhs { t });
        }
        let est = (halves - full).abs() / 15.0;
        let tol = abs + rel * y.abs().max(halves.abs());
        if est <= tol {
            t += h;
            y = halves;
            steps += 1;
            let factor = if est == 0.0 {
                GROWTH_CAP
            } else {
                (SAFETY * (tol / est).powf(0.2)).clamp(SHRINK_FLOOR, GROWTH_CAP)
            };
            h *= factor;
        } else {
            rejects += 1;
            h *= (SAFETY * (tol / est).powf(0.2)).clamp(SHRINK_FLOOR, GROWTH_CAP);
        }
    }

    Ok(OdeSolution {
        final_state: y,
        steps_taken: steps,
        rejected_steps: rejects,
    })
}
