//! Seeded random instances for property sweeps.
//!
//! Instance `i` of a run with seed `s` is drawn from a ChaCha stream keyed by
//! `(s, i)`, so instances are reproducible individually and can be
//! generated in any order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{power_capacity, System, SystemError};
use crate::exprlang::FunctionSpec;

pub const POINT_RANGE: (f64, f64) = (0.1, 50.0);
pub const COEFF_RANGE: (f64, f64) = (0.1, 10.0);
pub const ORDER_RANGE: (f64, f64) = (-3.0, 3.0);
pub const MAX_BODIES: usize = 6;

/// RNG for instance `index` of the run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A weight function from the sweep families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightDraw {
    /// `c·x^(p−1)`; `p = 1` is a constant, `p = 0` is `c/x`, `p = −1` is
    /// `c/x²`.
    Power {
        c: f64,
        p: f64,
    },
    Linear {
        c: f64,
    },
    Exponential {
        c: f64,
    },
}

impl WeightDraw {
    pub fn spec(&self) -> FunctionSpec {
        match *self {
            WeightDraw::Power { c, p } => power_capacity(c, p),
            WeightDraw::Linear { c } => FunctionSpec::parse(&format!("{c:?}*x")).expect("valid"),
            WeightDraw::Exponential { c } => {
                FunctionSpec::parse(&format!("{c:?}*exp(x)")).expect("valid")
            }
        }
    }

    pub fn coefficient(&self) -> f64 {
        match *self {
            WeightDraw::Power { c, .. }
            | WeightDraw::Linear { c }
            | WeightDraw::Exponential { c } => c,
        }
    }

    /// Power-mean order whose closed form is this weight's balance root.
    pub fn order(&self) -> Option<f64> {
        match *self {
            WeightDraw::Power { p, .. } => Some(p),
            WeightDraw::Linear { .. } => Some(2.0),
            WeightDraw::Exponential { .. } => None,
        }
    }
}

/// Which weight shapes a draw may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFamily {
    /// `c`, `c/x`, `c/x²` and `c·x^(p−1)` with `p ∈ [−3, 3]`.
    Powers,
    /// `c`, `c/x`, `c/x²`, `c·x` and `c·eˣ`.
    WithExponential,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDraw {
    pub points: Vec<f64>,
    pub weights: Vec<WeightDraw>,
}

impl SystemDraw {
    pub fn system(&self, grid_size: usize) -> Result<System, SystemError> {
        let specs: Vec<FunctionSpec> = self.weights.iter().map(WeightDraw::spec).collect();
        System::from_parts(&self.points, &specs, grid_size)
    }

    /// Common power-mean order when every weight shares one, i.e. when the
    /// root has a closed form.
    pub fn common_order(&self) -> Option<f64> {
        let first = self.weights.first()?.order()?;
        self.weights
            .iter()
            .all(|w| w.order() == Some(first))
            .then_some(first)
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.weights.iter().map(WeightDraw::coefficient).collect()
    }
}

fn coefficient(rng: &mut impl Rng) -> f64 {
    rng.gen_range(COEFF_RANGE.0..=COEFF_RANGE.1)
}

fn draw_weight(rng: &mut impl Rng, family: WeightFamily) -> WeightDraw {
    let c = coefficient(rng);
    match (family, rng.gen_range(0..5)) {
        (_, 0) => WeightDraw::Power { c, p: 1.0 },
        (_, 1) => WeightDraw::Power { c, p: 0.0 },
        (_, 2) => WeightDraw::Power { c, p: -1.0 },
        (WeightFamily::Powers, _) => WeightDraw::Power {
            c,
            p: rng.gen_range(ORDER_RANGE.0..=ORDER_RANGE.1),
        },
        (WeightFamily::WithExponential, 3) => WeightDraw::Linear { c },
        (WeightFamily::WithExponential, _) => WeightDraw::Exponential { c },
    }
}

/// Random points with random weights. Half of the draws share a single
/// weight shape (with independent coefficients) so that their root has a
/// closed form.
pub fn draw_system(rng: &mut impl Rng, family: WeightFamily) -> SystemDraw {
    let n = rng.gen_range(1..=MAX_BODIES);
    let points = (0..n)
        .map(|_| rng.gen_range(POINT_RANGE.0..=POINT_RANGE.1))
        .collect();
    let weights = if rng.gen_bool(0.5) {
        let shape = draw_weight(rng, family);
        (0..n)
            .map(|_| {
                let c = coefficient(rng);
                match shape {
                    WeightDraw::Power { p, .. } => WeightDraw::Power { c, p },
                    WeightDraw::Linear { .. } => WeightDraw::Linear { c },
                    WeightDraw::Exponential { .. } => WeightDraw::Exponential { c },
                }
            })
            .collect()
    } else {
        (0..n).map(|_| draw_weight(rng, family)).collect()
    };
    SystemDraw { points, weights }
}

/// Monotone test functions for the sign law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GFamily {
    Decreasing,
    Increasing,
}

impl GFamily {
    pub fn members(self) -> &'static [&'static str] {
        match self {
            GFamily::Decreasing => &["1/x", "exp(-x)", "1/(1+x)"],
            GFamily::Increasing => &["x", "x^2", "ln(1+x)"],
        }
    }

    pub fn draw(self, rng: &mut impl Rng) -> FunctionSpec {
        let members = self.members();
        FunctionSpec::parse(members[rng.gen_range(0..members.len())]).expect("valid")
    }
}
