use serde::{Deserialize, Serialize};

use crate::exprlang::DEFAULT_GRID_SIZE;
use crate::quadrature::{Integrator, DEFAULT_MAX_PANELS};

pub const DEFAULT_ROOT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

/// Numerical knobs shared by the solver, the functional and the thermal
/// model.
///
/// `quad_tol` is the budget for a whole sum of integrals; each of the `n`
/// integrals in a sum gets `quad_tol / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute tolerance on the balance value at the returned root.
    pub root_tol: f64,
    pub quad_tol: f64,
    /// Sample count for positivity and monotonicity checks.
    pub grid_size: usize,
    pub max_panels: usize,
    pub max_iterations: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_tol: DEFAULT_ROOT_TOL,
            quad_tol: DEFAULT_ROOT_TOL / 100.0,
            grid_size: DEFAULT_GRID_SIZE,
            max_panels: DEFAULT_MAX_PANELS,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl Tolerances {
    /// Integrator for one of `n` integrals sharing the quadrature budget.
    pub fn integrator(&self, n: usize) -> Integrator {
        Integrator {
            tol: self.quad_tol / n.max(1) as f64,
            max_panels: self.max_panels,
        }
    }

    /// Returns the name of the first out-of-range field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err((name, format!("must be a positive finite number, got {v}")))
            }
        };
        positive("root_tol", self.root_tol)?;
        positive("quad_tol", self.quad_tol)?;
        if self.grid_size < 2 {
            return Err((
                "grid_size",
                format!("must be at least 2, got {}", self.grid_size),
            ));
        }
        if self.max_panels < 8 {
            return Err((
                "max_panels",
                format!("must be at least 8, got {}", self.max_panels),
            ));
        }
        if self.max_iterations == 0 {
            return Err(("max_iterations", "must be at least 1".into()));
        }
        Ok(())
    }
}
