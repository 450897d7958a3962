//! Signed adaptive Simpson integration with a Richardson error estimate.
//!
//! Each panel is compared against its two halves; the difference `Δ`
//! between the coarse and refined Simpson sums gives the local error
//! estimate `|Δ|/15`, and the accepted value is the extrapolated
//! `S₂ + Δ/15`. A panel of width `h` is accepted once its estimate is
//! within `tol·h/L`, so the estimates of all panels add up to at most
//! `tol`. Panels whose `Δ` is already at the level of floating-point noise
//! are accepted as well; [`IntegralResult::error_bound`] then carries a
//! roundoff term proportional to `∫|f|`.
//!
//! Panels are processed depth-first, left to right, and the value is the
//! compensated sum of the accepted panels in interval order, so the result
//! is deterministic.

use serde::Serialize;
use thiserror::Error;

use crate::exprlang::{EvalError, FunctionSpec};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_PANELS: usize = 1_000_000;

/// Number of panels the interval is split into before adapting.
const INITIAL_PANELS: usize = 4;
/// `Δ` below this many ulps of the refined sum is treated as noise.
const NOISE_ULPS: f64 = 64.0;
/// Roundoff allowance added to the error bound, in ulps of `∫|f|`.
const ROUNDOFF_ULPS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_bound: f64,
    pub subdivisions: usize,
}

impl IntegralResult {
    pub const ZERO: IntegralResult = IntegralResult {
        value: 0.0,
        error_bound: 0.0,
        subdivisions: 0,
    };
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("integration endpoints must be positive and finite, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("panel budget of {budget} exhausted (error estimate {estimate:e})")]
    BudgetExceeded { budget: usize, estimate: f64 },
    #[error("tolerance {tol:e} not reached: panel near x = {x} cannot be refined further")]
    ToleranceNotReached { tol: f64, x: f64 },
}

/// Tolerance and panel budget for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub tol: f64,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            tol: DEFAULT_QUAD_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Neumaier compensated summation.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl Integrator {
    pub fn new(tol: f64) -> Integrator {
        Integrator {
            tol,
            ..Integrator::default()
        }
    }

    pub fn integrate(
        &self,
        f: &FunctionSpec,
        a: f64,
        b: f64,
    ) -> Result<IntegralResult, QuadratureError> {
        self.integrate_fn(|x| f.evaluate(x), a, b)
    }

    /// Signed integral of an arbitrary closure from `a` to `b`.
    pub fn integrate_fn<F>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
    ) -> Result<IntegralResult, QuadratureError>
    where
        F: FnMut(f64) -> Result<f64, EvalError>,
    {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(QuadratureError::InvalidInterval { a, b });
        }
        if !(self.tol > 0.0) {
            return Err(QuadratureError::InvalidTolerance(self.tol));
        }
        if a == b {
            return Ok(IntegralResult::ZERO);
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let length = hi - lo;

        // Seed the stack so that the leftmost panel is popped first.
        let n0 = INITIAL_PANELS;
        let mut nodes = Vec::with_capacity(2 * n0 + 1);
        for i in 0..=2 * n0 {
            let x = if i == 2 * n0 {
                hi
            } else {
                lo + length * i as f64 / (2 * n0) as f64
            };
            nodes.push((x, f(x)?));
        }
        let mut stack: Vec<Panel> = (0..n0)
            .rev()
            .map(|i| {
                let (pa, fa) = nodes[2 * i];
                let (_, fm) = nodes[2 * i + 1];
                let (pb, fb) = nodes[2 * i + 2];
                Panel {
                    a: pa,
                    b: pb,
                    fa,
                    fm,
                    fb,
                    whole: simpson(pa, pb, fa, fm, fb),
                }
            })
            .collect();

        let mut value = CompensatedSum::default();
        let mut truncation = 0.0;
        let mut abs_sum = 0.0;
        let mut accepted = 0usize;

        while let Some(p) = stack.pop() {
            if accepted + stack.len() + 2 > self.max_panels {
                return Err(QuadratureError::BudgetExceeded {
                    budget: self.max_panels,
                    estimate: truncation,
                });
            }
            let m = 0.5 * (p.a + p.b);
            let lm = 0.5 * (p.a + m);
            let rm = 0.5 * (m + p.b);
            let flm = f(lm)?;
            let frm = f(rm)?;
            let left = simpson(p.a, m, p.fa, flm, p.fm);
            let right = simpson(m, p.b, p.fm, frm, p.fb);
            let refined = left + right;
            let delta = refined - p.whole;
            let local_tol = self.tol * (p.b - p.a) / length;
            let noise = NOISE_ULPS * f64::EPSILON * (left.abs() + right.abs());

            if delta.abs() <= 15.0 * local_tol || delta.abs() <= noise {
                let v = refined + delta / 15.0;
                value.add(v);
                truncation += delta.abs() / 15.0;
                abs_sum += left.abs() + right.abs();
                accepted += 1;
                continue;
            }
            // Quarter points that collapse onto their neighbours mean the
            // panel is as narrow as the floating-point grid allows.
            if !(p.a < lm && lm < m && m < rm && rm < p.b) {
                return Err(QuadratureError::ToleranceNotReached {
                    tol: self.tol,
                    x: m,
                });
            }
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                whole: right,
            });
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                whole: left,
            });
        }

        Ok(IntegralResult {
            value: sign * value.total(),
            error_bound: truncation + ROUNDOFF_ULPS * f64::EPSILON * abs_sum,
            subdivisions: accepted,
        })
    }
}

/// Signed integral of `f` from `a` to `b` with absolute tolerance `tol`.
pub fn integrate(
    f: &FunctionSpec,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<IntegralResult, QuadratureError> {
    Integrator::new(tol).integrate(f, a, b)
}
