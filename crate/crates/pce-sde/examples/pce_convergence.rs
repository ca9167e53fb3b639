//! Spectral convergence of the chaos expansion's moments.
//!
//! Projecting the gBm terminal value on Hermite polynomials of the germ, the
//! mean and variance errors against the analytic lognormal law decay faster
//! than any fixed polynomial rate in the degree p — until they hit the ODE
//! integrator's accuracy floor and plateau. Both regimes are visible below,
//! at both tolerance presets.
//!
//! Run with: cargo run --example pce_convergence

use pce_sde::models::{analytic_law, ModelSpec};
use pce_sde::nisp::project;
use pce_sde::ode::Tolerances;

fn main() {
    let model = ModelSpec::Gbm {
        s0: 100.0,
        r: 0.03,
        sigma: 0.15,
        horizon: 1.0,
    };
    let law = analytic_law(&model).unwrap();
    println!(
        "gBm σ=15%: analytic mean {:.9}, variance {:.9}",
        law.mean(),
        law.variance()
    );

    println!(
        "\n{:>3} {:>13} {:>13} {:>13} {:>13}",
        "p", "mean err std", "var err std", "mean err tgt", "var err tgt"
    );
    for p in 1..=10 {
        let standard = project(&model, p, Tolerances::STANDARD).unwrap();
        let tight = project(&model, p, Tolerances::TIGHT).unwrap();
        println!(
            "{p:>3} {:>13.4e} {:>13.4e} {:>13.4e} {:>13.4e}",
            (standard.mean() - law.mean()).abs(),
            (standard.variance() - law.variance()).abs(),
            (tight.mean() - law.mean()).abs(),
            (tight.variance() - law.variance()).abs()
        );
    }
    println!("\nThe spectral decay flattens once truncation error drops below the");
    println!("integrator floor (~3.4e-9 absolute here). gBm's drift ODE is linear and");
    println!("germ-independent — so gentle that both presets take the same steps and");
    println!("share a floor; on Vasicek and CIR the presets genuinely differ.");

    // The coefficients themselves tell the same story.
    let expansion = project(&model, 10, Tolerances::TIGHT).unwrap();
    println!("\nLeading coefficients |c_i| (degree-10 expansion):");
    for (i, c) in expansion.coefficients.iter().enumerate().take(8) {
        println!("  c_{i} = {c:>13.4e}");
    }
}
