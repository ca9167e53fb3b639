//! The Hermite basis and its Gauss quadrature under the germ measure.
//!
//! The germ is ξ ~ N(0, 1/2), matching the physicists' Hermite weight: the
//! basis satisfies E[Ψ_i(ξ)Ψ_j(ξ)] = δ_ij·2^i·i!, and the N-node rule
//! integrates polynomials up to degree 2N−1 exactly. This example verifies
//! both numerically and shows the rule converging on a non-polynomial
//! integrand.
//!
//! Run with: cargo run --example hermite_quadrature

use pce_sde::chaos::{hermite_eval, norm_sq, quadrature_rule};

fn main() {
    // Orthonormality through the 12-node rule (exact through degree 23).
    let rule = quadrature_rule(12).unwrap();
    println!("E[Ψ_i·Ψ_j] under ξ ~ N(0,1/2), 12-node rule:");
    println!(
        "{:>4} {:>4} {:>14} {:>14}",
        "i", "j", "quadrature", "2^i·i!"
    );
    for i in [0usize, 1, 2, 5, 9] {
        for j in [i, i + 2] {
            let inner = rule.integrate(|x| hermite_eval(i, x) * hermite_eval(j, x));
            let exact = if i == j { norm_sq(i) } else { 0.0 };
            println!("{i:>4} {j:>4} {inner:>14.6e} {exact:>14.6e}");
        }
    }

    // Monomial exactness right at the 2N−1 edge.
    println!("\nMonomial moments E[ξ^k] (N=6 rule, exact through k=11):");
    let rule = quadrature_rule(6).unwrap();
    let mut moment = 1.0; // E[ξ^0]
    for k in (0..=11).step_by(2) {
        if k > 0 {
            moment *= (k - 1) as f64 / 2.0; // (k−1)!!/2^{k/2} recurrence
        }
        let quad = rule.integrate(|x| x.powi(k));
        println!("  k={k:>2}: quadrature {quad:>13.10}, closed form {moment:>13.10}");
    }

    // A smooth non-polynomial integrand: E[e^ξ] = e^{1/4} for ξ ~ N(0,1/2).
    println!("\nE[e^ξ] as the node count grows (exact: e^0.25):");
    let exact = 0.25f64.exp();
    for n in [2usize, 4, 8, 16] {
        let rule = quadrature_rule(n).unwrap();
        let approx = rule.integrate(f64::exp);
        println!(
            "  N={n:>2}: {approx:.15}  (error {:.2e})",
            (approx - exact).abs()
        );
    }
    println!("  exact: {exact:.15}");
}
