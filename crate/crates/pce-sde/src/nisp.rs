//! Non-Intrusive Spectral Projection: chaos coefficients by quadrature.
//!
//! The degree-p expansion of the terminal value is
//! `Y^(p) = Σ_{i=0..p} c_i Ψ_i(ξ)` with
//! `c_i = (1/‖Ψ_i‖²)·Σ_j w_j·M(ξ_j)·Ψ_i(ξ_j)`, where `M` is the pathwise
//! solution functional from [`crate::doss`] and `(ξ_j, w_j)` the germ
//! quadrature rule from [`crate::chaos`].
//!
//! By default the rule uses `N = p + 1` nodes — the smallest rule that
//! reproduces the reference error tables; an explicit node-count override is
//! available (and surfaced as `--nodes` on the CLI) so the effect of
//! under-integration can be studied. Coefficient sums run in fixed
//! ascending-node order with compensated accumulation, so parallel and serial
//! projections produce bit-identical expansions.

use crate::chaos::{norm_sq, quadrature_rule, ChaosError, QuadratureRule};
use crate::doss::{evaluate_solution_at_node, DossError};
use crate::models::ModelSpec;
use crate::ode::Tolerances;
use crate::sampling::{draw_germ, SamplingPlan};
use rayon::prelude::*;
use std::time::Instant;
use thiserror::Error;

/// Projection failures.
#[derive(Debug, Error)]
pub enum NispError {
    /// Could not build the quadrature rule.
    #[error(transparent)]
    Chaos(#[from] ChaosError),
    /// A node evaluation failed; the whole projection is abandoned.
    #[error("solution evaluation failed at node {index} (ξ = {xi:.6}): {source}")]
    NodeEvaluation {
        /// Index of the offending node (ascending order).
        index: usize,
        /// Node abscissa.
        xi: f64,
        /// Underlying failure.
        source: DossError,
    },
}

/// A truncated chaos expansion of the terminal value.
#[derive(Debug, Clone, PartialEq)]
pub struct PceExpansion {
    /// Coefficients c_0..c_p.
    pub coefficients: Vec<f64>,
    /// Truncation degree p.
    pub degree: usize,
    /// Model the expansion approximates.
    pub model: ModelSpec,
    /// ODE tolerance preset used at the nodes.
    pub tolerances: Tolerances,
    /// Number of quadrature nodes used.
    pub nodes_used: usize,
    /// Wall-clock seconds spent evaluating the solution at the nodes.
    pub node_eval_seconds: f64,
    /// Wall-clock seconds spent forming the coefficients.
    pub projection_seconds: f64,
}

/// Compensated (Neumaier) running sum, used so coefficient accumulation is
/// insensitive to node count and term ordering noise.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl PceExpansion {
    /// The expansion mean, `c_0`.
    pub fn mean(&self) -> f64 {
        self.coefficients[0]
    }

    /// The expansion variance, `Σ_{i≥1} c_i²·‖Ψ_i‖²`.
    pub fn variance(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for (i, &c) in self.coefficients.iter().enumerate().skip(1) {
            acc.add(c * c * norm_sq(i));
        }
        acc.value()
    }

    /// Evaluate `Σ_i c_i Ψ_i(xi)` by running the three-term recurrence once
    /// and accumulating directly (no per-term polynomial re-evaluation).
    pub fn eval(&self, xi: f64) -> f64 {
        let mut acc = self.coefficients[0];
        if self.degree == 0 {
            return acc;
        }
        let mut prev = 1.0;
        let mut curr = 2.0 * xi;
        acc += self.coefficients[1] * curr;
        for (i, &c) in self.coefficients.iter().enumerate().skip(2) {
            let next = 2.0 * xi * curr - 2.0 * (i as f64 - 1.0) * prev;
            prev = curr;
            curr = next;
            acc += c * curr;
        }
        acc
    }

    /// Push a sampling plan through the expansion: draw germs, evaluate.
    pub fn sample(&self, plan: &SamplingPlan) -> Vec<f64> {
        draw_germ(plan)
            .into_iter()
            .map(|xi| self.eval(xi))
            .collect()
    }

    /// Parseval tail `reference − Σ_{i=0..p} c_i²·‖Ψ_i‖²`: an estimate of the
    /// squared mean-square truncation error against a reference second moment.
    pub fn parseval_tail(&self, reference_second_moment: f64) -> f64 {
        assert!(
            reference_second_moment >= 0.0,
            "reference second moment must be nonnegative"
        );
        let mut acc = CompensatedSum::default();
        for (i, &c) in self.coefficients.iter().enumerate() {
            acc.add(c * c * norm_sq(i));
        }
        reference_second_moment - acc.value()
    }
}

/// Project with the default rule of `p + 1` nodes.
pub fn project(
    model: &ModelSpec,
    degree: usize,
    tolerances: Tolerances,
) -> Result<PceExpansion, NispError> {
    project_with_options(model, degree, None, tolerances, false)
}

/// Project with an explicit node count (the `--nodes` escape hatch).
pub fn project_with_nodes(
    model: &ModelSpec,
    degree: usize,
    nodes: usize,
    tolerances: Tolerances,
) -> Result<PceExpansion, NispError> {
    project_with_options(model, degree, Some(nodes), tolerances, false)
}

/// Full-control projection. `nodes` of `None` means `p + 1`; `parallel` fans
/// the node evaluations across threads (bit-identical to serial, because the
/// reduction order stays ascending-node).
pub fn project_with_options(
    model: &ModelSpec,
    degree: usize,
    nodes: Option<usize>,
    tolerances: Tolerances,
    parallel: bool,
) -> Result<PceExpansion, NispError> {
    let node_count = nodes.unwrap_or(degree + 1);
    let rule: QuadratureRule = quadrature_rule(node_count)?;

    let eval_start = Instant::now();
    let evaluations: Vec<f64> = if parallel {
        let results: Vec<Result<f64, DossError>> = rule
            .nodes
            .par_iter()
            .map(|&xi| evaluate_solution_at_node(model, xi, tolerances))
            .collect();
        collect_node_values(&rule, results)?
    } else {
        let results: Vec<Result<f64, DossError>> = rule
            .nodes
            .iter()
            .map(|&xi| evaluate_solution_at_node(model, xi, tolerances))
            .collect();
        collect_node_values(&rule, results)?
    };
    let node_eval_seconds = eval_start.elapsed().as_secs_f64();

    let projection_start = Instant::now();
    let mut coefficients = Vec::with_capacity(degree + 1);
    // Ψ_i at every node via the recurrence, one degree at a time.
    let mut psi_prev: Vec<f64> = vec![1.0; rule.len()];
    let mut psi_curr: Vec<f64> = rule.nodes.iter().map(|&x| 2.0 * x).collect();
    for i in 0..=degree {
        let psi: &[f64] = match i {
            0 => &psi_prev,
            1 => &psi_curr,
            _ => {
                for j in 0..rule.len() {
                    let next =
                        2.0 * rule.nodes[j] * psi_curr[j] - 2.0 * (i as f64 - 1.0) * psi_prev[j];
                    psi_prev[j] = psi_curr[j];
                    psi_curr[j] = next;
                }
                &psi_curr
            }
        };
        let mut acc = CompensatedSum::default();
        for j in 0..rule.len() {
            acc.add(rule.weights[j] * evaluations[j] * psi[j]);
        }
        coefficients.push(acc.value() / norm_sq(i));
    }
    let projection_seconds = projection_start.elapsed().as_secs_f64();

    Ok(PceExpansion {
        coefficients,
        degree,
        model: *model,
        tolerances,
        nodes_used: rule.len(),
        node_eval_seconds,
        projection_seconds,
    })
}

/// Unwrap per-node results, reporting the first failing node.
fn collect_node_values(
    rule: &QuadratureRule,
    results: Vec<Result<f64, DossError>>,
) -> Result<Vec<f64>, NispError> {
    let mut values = Vec::with_capacity(results.len());
    for (index, result) in results.into_iter().enumerate() {
        match result {
            Ok(v) => values.push(v),
            Err(source) => {
                return Err(NispError::NodeEvaluation {
                    index,
                    xi: rule.nodes[index],
                    source,
                })
            }
        }
    }
    Ok(values)
}
