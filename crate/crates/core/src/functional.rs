//! The weighted functional `S(g) = Σᵢ ∫_{xᵢ}^{x0} fᵢ·g` and its sign law.
//!
//! At the balance root `x0`, `S(g) ≥ 0` for decreasing `g` and `S(g) ≤ 0`
//! for increasing `g`. Monotonicity of `g` is decided by sampling unless
//! the caller asserts it.

use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{balance, solve_equilibrium, EquilibriumError, EquilibriumResult, System};
use crate::exprlang::{uniform_grid, EvalError, FunctionSpec};
use crate::quadrature::{IntegralResult, QuadratureError};
use crate::tolerances::Tolerances;

/// Relative slack allowed between neighbouring samples before a pair counts
/// as a rise or a fall.
pub const MONOTONICITY_REL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum MonotonicityClass {
    Decreasing,
    Increasing,
    Constant,
    /// `g(x_a) → g(x_b)` is the first adjacent pair contradicting the trend
    /// seen before it.
    NonMonotone {
        x_a: f64,
        g_a: f64,
        x_b: f64,
        g_b: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSource {
    Sampled,
    Asserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectedSign {
    #[serde(rename = ">=0")]
    NonNegative,
    #[serde(rename = "<=0")]
    NonPositive,
    #[serde(rename = "=0")]
    Zero,
    #[serde(rename = "none")]
    Unspecified,
}

impl ExpectedSign {
    pub fn for_class(class: &MonotonicityClass) -> ExpectedSign {
        match class {
            MonotonicityClass::Decreasing => ExpectedSign::NonNegative,
            MonotonicityClass::Increasing => ExpectedSign::NonPositive,
            MonotonicityClass::Constant => ExpectedSign::Zero,
            MonotonicityClass::NonMonotone { .. } => ExpectedSign::Unspecified,
        }
    }

    /// Whether `value` is on the expected side of zero, allowing `error_bound`.
    pub fn admits(self, value: f64, error_bound: f64) -> bool {
        match self {
            ExpectedSign::NonNegative => value >= -error_bound,
            ExpectedSign::NonPositive => value <= error_bound,
            ExpectedSign::Zero => value.abs() <= error_bound,
            ExpectedSign::Unspecified => true,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ExpectedSign::NonNegative => ">=0",
            ExpectedSign::NonPositive => "<=0",
            ExpectedSign::Zero => "=0",
            ExpectedSign::Unspecified => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("g cannot be evaluated: {0}")]
    Eval(#[from] EvalError),
    #[error("invalid sampling interval [{a}, {b}] with {grid_size} points")]
    InvalidGrid { a: f64, b: f64, grid_size: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// Samples `g` on a uniform grid over `[a, b]` and classifies it.
///
/// Adjacent differences within `1e-12·max|g|` are treated as flat. The
/// result is a sampled classification, not a proof.
pub fn classify_monotonicity(
    g: &FunctionSpec,
    a: f64,
    b: f64,
    grid_size: usize,
) -> Result<MonotonicityClass, FunctionalError> {
    if !(a > 0.0 && a <= b && b.is_finite()) || (grid_size < 2 && a < b) {
        return Err(FunctionalError::InvalidGrid { a, b, grid_size });
    }
    let n = if a == b { 1 } else { grid_size };
    let samples = uniform_grid(a, b, n)
        .map(|x| g.evaluate(x).map(|v| (x, v)))
        .collect::<Result<Vec<_>, _>>()?;
    let scale = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let eps = MONOTONICITY_REL_EPS * scale;

    let (mut rises, mut falls) = (false, false);
    for pair in samples.windows(2) {
        let ((x_a, g_a), (x_b, g_b)) = (pair[0], pair[1]);
        let d = g_b - g_a;
        rises |= d > eps;
        falls |= d < -eps;
        if rises && falls {
            return Ok(MonotonicityClass::NonMonotone { x_a, g_a, x_b, g_b });
        }
    }
    Ok(match (rises, falls) {
        (false, false) => MonotonicityClass::Constant,
        (true, false) => MonotonicityClass::Increasing,
        _ => MonotonicityClass::Decreasing,
    })
}

/// `S(g)` with its per-body terms, in system order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub error_bound: f64,
    pub terms: Vec<IntegralResult>,
}

/// `Σᵢ ∫_{xᵢ}^{x0} fᵢ·g`, each term integrated with `quad_tol / n`.
///
/// Bodies sitting exactly at `x0` contribute an exact zero.
pub fn weighted_functional(
    system: &System,
    g: &FunctionSpec,
    x0: f64,
    tols: &Tolerances,
) -> Result<FunctionalValue, QuadratureError> {
    let q = tols.integrator(system.len());
    let terms = system
        .bodies()
        .iter()
        .map(|b| q.integrate(&b.weight.product(g), b.point, x0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FunctionalValue {
        value: terms.iter().map(|t| t.value).sum(),
        error_bound: terms.iter().map(|t| t.error_bound).sum(),
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalVerdict {
    pub x0: f64,
    pub value: f64,
    /// Quadrature error of `S` plus the effect of the root's own residual.
    pub error_bound: f64,
    pub g_class: MonotonicityClass,
    pub class_source: ClassSource,
    pub expected_sign: ExpectedSign,
    pub holds: bool,
}

/// Solves for `x0`, classifies `g` on `[x₁, xₙ]`, and checks the sign of
/// `S(g)`.
pub fn verify_theorem(
    system: &System,
    g: &FunctionSpec,
    tols: &Tolerances,
) -> Result<FunctionalVerdict, FunctionalError> {
    verify_theorem_with(system, g, tols, None)
}

/// Like [`verify_theorem`], optionally with a caller-asserted class for `g`
/// in place of the sampled one.
pub fn verify_theorem_with(
    system: &System,
    g: &FunctionSpec,
    tols: &Tolerances,
    assume: Option<MonotonicityClass>,
) -> Result<FunctionalVerdict, FunctionalError> {
    let eq = solve_equilibrium(system, tols)?;
    let (g_class, class_source) = match assume {
        Some(c) => (c, ClassSource::Asserted),
        None => (
            classify_monotonicity(g, system.lo(), system.hi(), tols.grid_size)?,
            ClassSource::Sampled,
        ),
    };
    verdict_at(system, g, &eq, g_class, class_source, tols)
}

fn verdict_at(
    system: &System,
    g: &FunctionSpec,
    eq: &EquilibriumResult,
    g_class: MonotonicityClass,
    class_source: ClassSource,
    tols: &Tolerances,
) -> Result<FunctionalVerdict, FunctionalError> {
    let x0 = eq.x0;
    let s = weighted_functional(system, g, x0, tols)?;
    // Moving x0 onto the exact root changes S by about g(x0)·F(x0); the
    // factor 2 covers the variation of g across that gap.
    let residual = balance(system, x0, tols)?;
    let root_effect = 2.0 * g.evaluate(x0)?.abs() * (residual.value.abs() + residual.error_bound);
    let error_bound = s.error_bound + root_effect;
    let expected_sign = ExpectedSign::for_class(&g_class);
    Ok(FunctionalVerdict {
        x0,
        value: s.value,
        error_bound,
        g_class,
        class_source,
        expected_sign,
        holds: expected_sign.admits(s.value, error_bound),
    })
}

/// One body's share of `S(g)` against `g(x0)·∫_{xᵢ}^{x0} fᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitTerm {
    pub point: f64,
    pub term: f64,
    pub anchor: f64,
    pub error_bound: f64,
    pub holds: bool,
}

/// Per-body inequalities that add up to the sign law.
///
/// For decreasing `g` every body satisfies `∫fᵢg ≥ g(x0)·∫fᵢ`, whether it
/// starts below or above `x0`; for increasing `g` the inequality reverses.
/// Constant `g` gives equality and a non-monotone `g` gives no claim.
pub fn proof_split(
    system: &System,
    g: &FunctionSpec,
    x0: f64,
    class: &MonotonicityClass,
    tols: &Tolerances,
) -> Result<Vec<SplitTerm>, FunctionalError> {
    let q = tols.integrator(system.len());
    let g0 = g.evaluate(x0)?;
    let sign = ExpectedSign::for_class(class);
    system
        .bodies()
        .iter()
        .map(|b| {
            let t = q.integrate(&b.weight.product(g), b.point, x0)?;
            let w = q.integrate(&b.weight, b.point, x0)?;
            let anchor = g0 * w.value;
            let error_bound = t.error_bound + g0.abs() * w.error_bound;
            Ok(SplitTerm {
                point: b.point,
                term: t.value,
                anchor,
                error_bound,
                holds: sign.admits(t.value - anchor, error_bound),
            })
        })
        .collect()
}
