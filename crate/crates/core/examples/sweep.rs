//! Seeded random sweep of the sign law.

use equilib::draws::{GFamily, WeightFamily};
use equilib::sweep::run_sweep;
use equilib::Tolerances;

fn main() {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let tols = Tolerances::default();
    for family in [GFamily::Decreasing, GFamily::Increasing] {
        for weights in [WeightFamily::Powers, WeightFamily::WithExponential] {
            let s = run_sweep(seed, 500, family, weights, &tols);
            println!(
                "seed {seed} {family:?} g, {weights:?} weights: {}/{} pass",
                s.passes, s.count
            );
            if let Some(c) = &s.first_counterexample {
                println!("  first counterexample: {c:?}");
            }
        }
    }
}
