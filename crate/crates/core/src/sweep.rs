//! Randomized sign-law sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::draws::{draw_system, instance_rng, GFamily, SystemDraw, WeightFamily};
use crate::functional::{verify_theorem, FunctionalVerdict};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub index: u64,
    pub draw: SystemDraw,
    pub g: String,
    /// Present when the verdict was computed but did not hold.
    pub verdict: Option<FunctionalVerdict>,
    /// Present when the instance failed to evaluate.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub count: u64,
    pub g_family: GFamily,
    pub weight_family: WeightFamily,
    pub passes: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

enum Outcome {
    Pass,
    Fail(Counterexample),
}

fn run_instance(
    seed: u64,
    index: u64,
    g_family: GFamily,
    weight_family: WeightFamily,
    tols: &Tolerances,
) -> Outcome {
    let mut rng = instance_rng(seed, index);
    let draw = draw_system(&mut rng, weight_family);
    let g = g_family.draw(&mut rng);
    let fail = |verdict, error| {
        Outcome::Fail(Counterexample {
            index,
            draw: draw.clone(),
            g: g.source().to_string(),
            verdict,
            error,
        })
    };
    let system = match draw.system(tols.grid_size) {
        Ok(s) => s,
        Err(e) => return fail(None, Some(e.to_string())),
    };
    match verify_theorem(&system, &g, tols) {
        Ok(v) if v.holds => Outcome::Pass,
        Ok(v) => fail(Some(v), None),
        Err(e) => fail(None, Some(e.to_string())),
    }
}

/// Checks the sign law on `count` random systems. Instances run in
/// parallel; results are merged in index order, so the summary depends only
/// on the arguments.
pub fn run_sweep(
    seed: u64,
    count: u64,
    g_family: GFamily,
    weight_family: WeightFamily,
    tols: &Tolerances,
) -> SweepSummary {
    let outcomes: Vec<Outcome> = (0..count)
        .into_par_iter()
        .map(|i| run_instance(seed, i, g_family, weight_family, tols))
        .collect();
    let passes = outcomes
        .iter()
        .filter(|o| matches!(o, Outcome::Pass))
        .count() as u64;
    let first_counterexample = outcomes.into_iter().find_map(|o| match o {
        Outcome::Pass => None,
        Outcome::Fail(c) => Some(c),
    });
    SweepSummary {
        seed,
        count,
        g_family,
        weight_family,
        passes,
        failures: count - passes,
        first_counterexample,
    }
}
