//! Polynomial chaos expansions for scalar SDEs at a fixed horizon.
//!
//! The crate approximates the time-T marginal of three classical models —
//! geometric Brownian motion, the Vasicek short-rate model, and the
//! Cox–Ingersoll–Ross model — by a truncated Hermite chaos expansion in a
//! single Gaussian germ ξ ~ N(0, 1/2). Coefficients come from non-intrusive
//! spectral projection: the SDE solution is rewritten through a pathwise ODE
//! (Doss representation), evaluated at Gauss–Hermite nodes, and projected on
//! the basis. Plain Monte Carlo, Latin hypercube, and Sobol quasi-Monte Carlo
//! estimators provide the baselines, and a benchmark harness reproduces
//! accuracy-versus-cost studies from declarative experiment configs.
//!
//! Modules mirror the pipeline:
//! - [`chaos`]: Hermite basis, norms, Gauss–Hermite quadrature for the germ.
//! - [`ode`]: adaptive step-doubling RK4 scalar integrator.
//! - [`models`]: model parameter sets, analytic time-T laws, special functions.
//! - [`doss`]: pathwise ODE representation mapping germ values to solutions.
//! - [`nisp`]: spectral projection, expansion statistics, expansion sampling.
//! - [`sampling`]: seeded germ sampling (plain/LHS), quantiles, standard errors.
//! - [`baselines`]: Sobol sequences, MC/QMC estimators, Euler–Maruyama paths.
//! - [`bench`]: experiment configs, runners, CSV reports, SVG plots.
//!
//! The examples directory exercises each capability end to end; the `pce-sde`
//! binary is a thin CLI over [`bench`].

pub mod baselines;
pub mod bench;
pub mod chaos;
pub mod doss;
pub mod models;
pub mod nisp;
pub mod ode;
pub mod sampling;

pub use chaos::{hermite_eval, norm_sq, quadrature_rule, HermiteBasis, QuadratureRule};
pub use doss::{doss_rhs, evaluate_solution_at_node, vasicek_rr_law, DossFunctional};
pub use models::{analytic_law, AnalyticLaw, ModelSpec};
pub use nisp::{project, project_with_nodes, PceExpansion};
pub use ode::{integrate, OdeProblem, OdeSolution, Tolerances};
pub use sampling::{draw_germ, sample_quantile, SamplingPlan, Scheme};
