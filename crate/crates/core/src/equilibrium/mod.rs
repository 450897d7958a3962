//! The balance function `F(x) = Σᵢ ∫_{xᵢ}^{x} fᵢ` and its root.
//!
//! With every `fᵢ > 0`, `F(x₁) ≤ 0 ≤ F(xₙ)` and `F` is strictly increasing,
//! so `[x₁, xₙ]` always brackets exactly one root and plain bisection finds
//! it.

pub(crate) mod means;

use serde::Serialize;
use thiserror::Error;

pub use means::{closed_form_mean, MeanError, MeanKind};

use crate::exprlang::{find_nonpositive, EvalError, FunctionSpec};
use crate::quadrature::{IntegralResult, QuadratureError};
use crate::tolerances::Tolerances;

/// Bisection stops once the bracket is this narrow relative to its upper end.
pub const BRACKET_REL_WIDTH: f64 = 1e-12;

/// One member of a [`System`]: a point and its positive weight function.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPoint {
    pub point: f64,
    pub weight: FunctionSpec,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("a system needs at least one point")]
    Empty,
    #[error("{points} points but {weights} weight functions")]
    LengthMismatch { points: usize, weights: usize },
    #[error("point {index} = {value} is not a positive finite number")]
    InvalidPoint { index: usize, value: f64 },
    #[error(
        "weight {index} is not positive at x = {x} (value {value}); checked on a sampled grid"
    )]
    NonPositiveWeight { index: usize, x: f64, value: f64 },
    #[error("weight {index} cannot be evaluated: {source}")]
    Eval { index: usize, source: EvalError },
}

impl SystemError {
    /// Input index the error refers to, if any.
    pub fn index(&self) -> Option<usize> {
        match *self {
            SystemError::InvalidPoint { index, .. }
            | SystemError::NonPositiveWeight { index, .. }
            | SystemError::Eval { index, .. } => Some(index),
            _ => None,
        }
    }
}

/// Points with their weight functions, sorted by point.
///
/// Construction validates every point and samples every weight for
/// positivity on `[min point, max point]`. Duplicate points are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    bodies: Vec<WeightedPoint>,
}

impl System {
    /// Validates and sorts (stably) by point. Error indices refer to the
    /// input order.
    pub fn new(bodies: Vec<(f64, FunctionSpec)>, grid_size: usize) -> Result<System, SystemError> {
        if bodies.is_empty() {
            return Err(SystemError::Empty);
        }
        for (index, (value, _)) in bodies.iter().enumerate() {
            if !(*value > 0.0 && value.is_finite()) {
                return Err(SystemError::InvalidPoint {
                    index,
                    value: *value,
                });
            }
        }
        let lo = bodies.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let hi = bodies.iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
        let grid = if lo == hi { 1 } else { grid_size };
        for (index, (_, weight)) in bodies.iter().enumerate() {
            match find_nonpositive(weight, lo, hi, grid) {
                Ok(None) => {}
                Ok(Some((x, value))) => {
                    return Err(SystemError::NonPositiveWeight { index, x, value })
                }
                Err(source) => return Err(SystemError::Eval { index, source }),
            }
        }
        let mut bodies: Vec<WeightedPoint> = bodies
            .into_iter()
            .map(|(point, weight)| WeightedPoint { point, weight })
            .collect();
        bodies.sort_by(|a, b| a.point.total_cmp(&b.point));
        Ok(System { bodies })
    }

    pub fn from_parts(
        points: &[f64],
        weights: &[FunctionSpec],
        grid_size: usize,
    ) -> Result<System, SystemError> {
        if points.len() != weights.len() {
            return Err(SystemError::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        System::new(
            points
                .iter()
                .copied()
                .zip(weights.iter().cloned())
                .collect(),
            grid_size,
        )
    }

    pub fn bodies(&self) -> &[WeightedPoint] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        self.bodies.iter().map(|b| b.point)
    }

    /// Smallest point, `x₁`.
    pub fn lo(&self) -> f64 {
        self.bodies[0].point
    }

    /// Largest point, `xₙ`.
    pub fn hi(&self) -> f64 {
        self.bodies[self.bodies.len() - 1].point
    }

    /// Every weight multiplied by `factor > 0`. The root does not move.
    pub fn scaled(&self, factor: f64) -> System {
        System {
            bodies: self
                .bodies
                .iter()
                .map(|b| WeightedPoint {
                    point: b.point,
                    weight: b.weight.scaled(factor),
                })
                .collect(),
        }
    }

    /// `Σᵢ fᵢ(x)`.
    pub fn total_weight(&self, x: f64) -> Result<f64, EvalError> {
        self.bodies.iter().map(|b| b.weight.evaluate(x)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bisection,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquilibriumResult {
    pub x0: f64,
    /// Balance value at `x0`.
    pub residual: f64,
    /// Final bracket; `[x0, x0]` on the closed-form path.
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(
        "balance does not change sign on [{lo}, {hi}] (F(lo) = {f_lo:e}, F(hi) = {f_hi:e}); \
         a weight is probably not positive there"
    )]
    BracketViolation {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("bracket [{lo}, {hi}] is invalid for this system")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("no convergence after {iterations} iterations (bracket width {width:e})")]
    IterationBudget { iterations: usize, width: f64 },
    #[error("|F(x0)| = {residual:e} exceeds root tolerance {tol:e} and the bracket resolution")]
    Unconverged { residual: f64, tol: f64 },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// `F(x) = Σᵢ ∫_{xᵢ}^{x} fᵢ`, each integral with `quad_tol / n`.
///
/// `x` need not lie inside `[x₁, xₙ]`.
pub fn balance(
    system: &System,
    x: f64,
    tols: &Tolerances,
) -> Result<IntegralResult, QuadratureError> {
    let q = tols.integrator(system.len());
    let mut total = IntegralResult::ZERO;
    for b in system.bodies() {
        let r = q.integrate(&b.weight, b.point, x)?;
        total.value += r.value;
        total.error_bound += r.error_bound;
        total.subdivisions += r.subdivisions;
    }
    Ok(total)
}

/// The unique root of the balance in `[x₁, xₙ]`.
pub fn solve_equilibrium(
    system: &System,
    tols: &Tolerances,
) -> Result<EquilibriumResult, EquilibriumError> {
    if system.len() == 1 || system.lo() == system.hi() {
        // Every integral is empty at the common point.
        let x0 = system.lo();
        return Ok(EquilibriumResult {
            x0,
            residual: 0.0,
            bracket: [x0, x0],
            iterations: 0,
            method: Method::ClosedForm,
        });
    }
    solve_in_bracket(system, system.lo(), system.hi(), tols)
}

/// Bisection on `[lo, hi]`, which must contain the root.
///
/// After the endpoint values, each step integrates `Σᵢ fᵢ` only over the
/// half-bracket it discards, so the cost per step shrinks with the bracket.
/// A final secant step inside the bracket polishes the estimate.
pub fn solve_in_bracket(
    system: &System,
    lo: f64,
    hi: f64,
    tols: &Tolerances,
) -> Result<EquilibriumResult, EquilibriumError> {
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(EquilibriumError::InvalidBracket { lo, hi });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = balance(system, lo, tols)?.value;
    let mut f_hi = balance(system, hi, tols)?.value;
    if f_lo > tols.root_tol || f_hi < -tols.root_tol {
        return Err(EquilibriumError::BracketViolation { lo, hi, f_lo, f_hi });
    }

    let q = tols.integrator(1);
    let sum = |x: f64| system.total_weight(x);
    let mut iterations = 0;
    while hi - lo > BRACKET_REL_WIDTH * hi && f_lo != 0.0 && f_hi != 0.0 {
        if iterations == tols.max_iterations {
            return Err(EquilibriumError::IterationBudget {
                iterations,
                width: hi - lo,
            });
        }
        iterations += 1;
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f_lo + q.integrate_fn(sum, lo, mid)?.value;
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    let mut best = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    if f_lo < 0.0 && f_hi > 0.0 {
        let secant = (lo - f_lo * (hi - lo) / (f_hi - f_lo)).clamp(lo, hi);
        if secant > lo && secant < hi {
            let f_secant = f_lo + q.integrate_fn(sum, lo, secant)?.value;
            if f_secant.abs() < best.1.abs() {
                best = (secant, f_secant);
            }
        }
    }

    let (x0, residual) = best;
    // With very large weights F cannot be resolved below its change across
    // the final bracket; that resolution replaces root_tol when larger.
    let resolution = system.total_weight(x0).map_err(QuadratureError::from)? * (hi - lo);
    if residual.abs() > tols.root_tol.max(resolution) {
        return Err(EquilibriumError::Unconverged {
            residual,
            tol: tols.root_tol,
        });
    }
    Ok(EquilibriumResult {
        x0,
        residual,
        bracket: [lo, hi],
        iterations,
        method: Method::Bisection,
    })
}

/// Numeric root of the power-mean system against its closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub p: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub difference: f64,
    /// `difference ≤ 10·root_tol`.
    pub agrees: bool,
}

/// Capacity whose balance root is the weighted power mean of order `p`:
/// `c·x^(p−1)`, or `c/x` for `p = 0`.
pub fn power_capacity(c: f64, p: f64) -> FunctionSpec {
    let src = if p == 0.0 {
        format!("{c:?}/x")
    } else if p == 1.0 {
        format!("{c:?}")
    } else {
        format!("{c:?}*x^({:?})", p - 1.0)
    };
    FunctionSpec::parse(&src).expect("generated capacity parses")
}

/// Solves the system `fᵢ = cᵢ·x^(p−1)` and compares with `M_p` (the
/// geometric mean for `p = 0`).
pub fn verify_closed_form(
    p: f64,
    weights: &[f64],
    points: &[f64],
    tols: &Tolerances,
) -> Result<ClosedFormCheck, EquilibriumError> {
    let closed_form =
        closed_form_mean(MeanKind::of_order(p), weights, points).map_err(|e| match e {
            MeanError::LengthMismatch { weights, points } => {
                EquilibriumError::System(SystemError::LengthMismatch { points, weights })
            }
            MeanError::NonPositive { index, value, .. } => {
                EquilibriumError::System(SystemError::InvalidPoint { index, value })
            }
            _ => EquilibriumError::System(SystemError::Empty),
        })?;
    let capacities: Vec<FunctionSpec> = weights.iter().map(|&c| power_capacity(c, p)).collect();
    let system = System::from_parts(points, &capacities, tols.grid_size)?;
    let numeric = solve_equilibrium(&system, tols)?.x0;
    let difference = (numeric - closed_form).abs();
    Ok(ClosedFormCheck {
        p,
        numeric,
        closed_form,
        difference,
        agrees: difference <= 10.0 * tols.root_tol,
    })
}
