//! The Sobol low-discrepancy generator behind the QMC baseline.
//!
//! Points come out in natural binary-index order from a vendored
//! direction-number table covering 1121 dimensions (CIR paths need one
//! dimension per time step). Dimension 1 reduces to the van der Corput
//! sequence, whose dyadic stratification is easy to see: the first 2^k
//! points hit every length-2^{−k} stratum exactly once.
//!
//! Run with: cargo run --example sobol_sequence

use pce_sde::baselines::SobolSequence;

fn main() {
    let mut sobol = SobolSequence::new(3).unwrap();
    println!("First points in dimension 3 (index 0 is skipped):");
    for _ in 0..8 {
        let index = sobol.index();
        let point = sobol.next_point();
        println!(
            "  i={index}: ({:.4}, {:.4}, {:.4})",
            point[0], point[1], point[2]
        );
    }

    // Dyadic stratification in dimension 1.
    let k = 4;
    let count = 1usize << k;
    let mut sobol = SobolSequence::new(1).unwrap();
    let mut strata = vec![0usize; count];
    for _ in 0..count {
        let u = sobol.next_point()[0];
        strata[(u * count as f64) as usize] += 1;
    }
    println!("\nDimension 1, first {count} points over {count} strata of width 1/{count}:");
    println!("  occupancy: {strata:?}");

    // Random access: skip_to jumps the cursor without generating.
    let mut sequential = SobolSequence::new(5).unwrap();
    for _ in 0..999 {
        sequential.next_point();
    }
    let mut skipped = SobolSequence::new(5).unwrap();
    skipped.skip_to(1000);
    assert_eq!(sequential.next_point(), skipped.next_point());
    println!("\npoint 1000 via generation equals point 1000 via skip_to.");

    // Discrepancy in action: QMC averages of x·y·z against the exact 1/8.
    println!("\n∫ xyz over [0,1)³ (exact 0.125) from the first M points:");
    for m in [64usize, 512, 4096, 32768] {
        let mut sobol = SobolSequence::new(3).unwrap();
        let mut sum = 0.0;
        for _ in 0..m {
            let p = sobol.next_point();
            sum += p[0] * p[1] * p[2];
        }
        println!(
            "  M={m:>6}: {:.8}  (error {:.2e})",
            sum / m as f64,
            (sum / m as f64 - 0.125).abs()
        );
    }
}
