//! Hermite chaos basis and Gauss–Hermite quadrature for a Gaussian germ.
//!
//! The germ is ξ ~ N(0, 1/2), whose density e^(-x²)/√π is exactly the
//! physicists' Gauss–Hermite weight normalized to unit mass. Consequently the
//! physicists' Hermite polynomials Ψ_i (Ψ₀=1, Ψ₁=2x, Ψ₂=4x²−2, …) are
//! orthogonal under the germ with E[Ψ_i²] = 2^i·i!, and an N-node
//! Gauss–Hermite rule integrates polynomials in ξ exactly up to degree 2N−1.
//!
//! Nodes and weights are computed by the Golub–Welsch method: eigenvalues of
//! the symmetric tridiagonal Jacobi matrix of the monic three-term recurrence
//! (zero diagonal, off-diagonal √(k/2)), with the germ weight of each node
//! obtained from the first component of the corresponding eigenvector.

use thiserror::Error;

/// Largest supported rule size. The Jacobi eigenproblem stays well
/// conditioned far beyond this, but norms 2^i·i! overflow f64 usefulness
/// long before, so the cap keeps the contract honest.
pub const MAX_NODES: usize = 64;

/// Errors from basis or quadrature construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChaosError {
    /// Rule size outside 1..=MAX_NODES.
    #[error("quadrature rule size {0} outside 1..={MAX_NODES}")]
    InvalidNodeCount(usize),
    /// The tridiagonal eigensolve failed to converge (never observed in range).
    #[error("eigenvalue iteration failed to converge for N={0}")]
    EigenFailure(usize),
}

/// Evaluate the physicists' Hermite polynomial Ψ_i(x) by the forward
/// recurrence Ψ_{i+1} = 2x·Ψ_i − 2i·Ψ_{i−1}.
pub fn hermite_eval(i: usize, x: f64) -> f64 {
    if i == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    for k in 1..i {
        let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Squared norm E[Ψ_i(ξ)²] = 2^i · i! under the germ ξ ~ N(0, 1/2).
///
/// Computed in exact integer arithmetic while 2^i·i! fits u128, then by f64
/// multiplication beyond (exact-to-rounding; overflows to +inf near i ≈ 150).
pub fn norm_sq(i: usize) -> f64 {
    let mut exact: u128 = 1;
    for k in 1..=i {
        match exact.checked_mul(2 * k as u128) {
            Some(v) => exact = v,
            None => {
                // continue in floating point from the last exact value
                let mut out = exact as f64;
                for j in k..=i {
                    out *= 2.0 * j as f64;
                }
                return out;
            }
        }
    }
    exact as f64
}

/// Orthogonal basis Ψ_0..Ψ_max_degree of the Hermite chaos.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteBasis {
    max_degree: usize,
}

impl HermiteBasis {
    /// Basis truncated at `max_degree` (inclusive).
    pub fn new(max_degree: usize) -> Self {
        Self { max_degree }
    }

    /// Highest degree carried by the basis.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Ψ_i(x). Panics if `i` exceeds the truncation degree (caller bug).
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        assert!(
            i <= self.max_degree,
            "basis degree {i} exceeds truncation {}",
            self.max_degree
        );
        hermite_eval(i, x)
    }

    /// E[Ψ_i²] for i within the truncation.
    pub fn norm_sq(&self, i: usize) -> f64 {
        assert!(
            i <= self.max_degree,
            "basis degree {i} exceeds truncation {}",
            self.max_degree
        );
        norm_sq(i)
    }
}

/// Gauss–Hermite rule for the germ: Σ w_j f(ξ_j) ≈ E[f(ξ)], ξ ~ N(0, 1/2).
///
/// Weights sum to 1 and the rule is exact for polynomials up to degree
/// `exactness_degree()` = 2N−1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// Nodes in ascending order, symmetric about 0.
    pub nodes: Vec<f64>,
    /// Positive weights matching `nodes`, summing to 1.
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when the rule is empty (never produced by `quadrature_rule`).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly: 2N−1.
    pub fn exactness_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// Apply the rule to a function of the germ.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Build the N-node Gauss–Hermite rule for the germ N(0, 1/2).
pub fn quadrature_rule(n: usize) -> Result<QuadratureRule, ChaosError> {
    if n == 0 || n > MAX_NODES {
        return Err(ChaosError::InvalidNodeCount(n));
    }
    // Jacobi matrix of the monic Hermite recurrence: zero diagonal,
    // off-diagonal b_k = sqrt(k/2), k = 1..N-1.
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n];
    for k in 1..n {
        off[k - 1] = (k as f64 / 2.0).sqrt();
    }
    // First components of the orthonormal eigenvectors; their squares are the
    // germ weights because the total germ mass is 1.
    let mut z = vec![0.0f64; n];
    z[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut z).map_err(|_| ChaosError::EigenFailure(n))?;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
    let nodes: Vec<f64> = idx.iter().map(|&j| diag[j]).collect();
    let weights: Vec<f64> = idx.iter().map(|&j| z[j] * z[j]).collect();
    Ok(QuadratureRule { nodes, weights })
}

/// QL algorithm with implicit shifts for a symmetric tridiagonal matrix,
/// accumulating the rotations only into the vector `z` (initially e₁), which
/// is all Golub–Welsch needs. `diag` holds eigenvalues on return.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], z: &mut [f64]) -> Result<(), ()> {
    let n = diag.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            // look for a negligible off-diagonal element
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(());
            }
            // implicit shift from the 2x2 block at l
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                let i1 = i - 1;
                let mut f = s * off[i1];
                let b = c * off[i1];
                r = f.hypot(g);
                off[i] = r;
                if r == 0.0 {
                    diag[i] -= p;
                    off[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i] - p;
                r = (diag[i1] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i] = g + p;
                g = c * r - b;
                // accumulate the rotation into z
                f = z[i];
                z[i] = s * z[i1] + c * f;
                z[i1] = c * z[i1] - s * f;
                i -= 1;
            }
            if r == 0.0 && i > l {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
