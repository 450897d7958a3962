//! Named inequalities obtained by choosing the weights `fᵢ` and the
//! monotone function `g`.
//!
//! Each entry computes both sides in closed form ([`InequalityReport`]) and
//! can also hand back the `(fᵢ, g)` instance ([`TheoremInstance`]) so the
//! generic engine can confirm the same relation independently
//! ([`cross_check`]).
//!
//! | entry     | `fᵢ`           | `g`                     | root  |
//! |-----------|----------------|-------------------------|-------|
//! | `amgm`    | `cᵢ`, `cᵢ/x`   | `1/x`                   | AM, GM |
//! | `power`   | `cᵢ·x^(p−1)`   | `x^(q−p)`               | `M_p` |
//! | `jensen`  | `λᵢ`           | `F′`                    | AM    |
//! | `shifted` | `cᵢ/x`         | `k·x^k/(x^k + c)`       | GM    |
//! | `logx`    | `cᵢ/x` or `cᵢ` | `(1−ln x)/x` or `/x²`   | GM or AM |

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::means::check_entries;
use crate::equilibrium::{
    closed_form_mean, power_capacity, MeanError, MeanKind, System, SystemError,
};
use crate::exprlang::{EvalError, FunctionSpec};
use crate::functional::{
    classify_monotonicity, verify_theorem, FunctionalError, FunctionalVerdict, MonotonicityClass,
};
use crate::tolerances::Tolerances;

/// Relative slack granted to closed-form comparisons.
pub const REPORT_REL_EPS: f64 = 1e-9;
/// Relative tolerance when checking a supplied derivative against a central
/// difference.
pub const DERIVATIVE_REL_TOL: f64 = 1e-5;
/// Where `(1 − ln x)/x` turns from decreasing to increasing.
pub const LOG_OVER_X_GM_THRESHOLD: f64 = 7.38905609893065; // e^2
/// Where `(1 − ln x)/x²` turns from decreasing to increasing.
pub const LOG_OVER_X_AM_THRESHOLD: f64 = 4.4816890703380645; // e^(3/2)

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Distance to violation: `rhs − lhs` for `<=`, `lhs − rhs` for `>=`.
    pub slack: f64,
    pub holds: bool,
    pub domain_note: String,
}

impl InequalityReport {
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        relation: Relation,
        domain_note: impl Into<String>,
    ) -> Self {
        let slack = match relation {
            Relation::Le => rhs - lhs,
            Relation::Ge => lhs - rhs,
        };
        let eps = REPORT_REL_EPS * 1f64.max(lhs.abs()).max(rhs.abs());
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            relation,
            slack,
            holds: slack >= -eps,
            domain_note: domain_note.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    Concave,
}

impl Convexity {
    pub fn name(self) -> &'static str {
        match self {
            Convexity::Convex => "convex",
            Convexity::Concave => "concave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogVariant {
    /// `ln(GM)/GM` against the weighted mean of `ln(xᵢ)/xᵢ`.
    GmSide,
    /// `ln(AM)/AM` against the weighted mean of `ln(xᵢ)/xᵢ`.
    AmSide,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Mean(#[from] MeanError),
    #[error("need p < q, got p = {p}, q = {q}")]
    OrderNotIncreasing { p: f64, q: f64 },
    #[error("{name} must be positive and finite, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error(
        "derivative check failed at x = {x}: supplied {supplied}, finite difference {numeric}"
    )]
    DerivativeMismatch { x: f64, supplied: f64, numeric: f64 },
    #[error(
        "derivative is {found} on the points' range, which contradicts a {declared:?} function"
    )]
    ConvexityMismatch {
        declared: Convexity,
        found: &'static str,
    },
    #[error(
        "points straddle the turning point {threshold} of g, so g is not monotone on their range \
         (hypothesis violated)"
    )]
    StraddlesThreshold { threshold: f64 },
    #[error("non-finite value while computing {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// A `(System, g)` pair whose functional sign reproduces a catalog report:
/// a `>=` report corresponds to `S(g) ≥ 0` and `<=` to `S(g) ≤ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremInstance {
    pub name: String,
    pub system: System,
    pub g: FunctionSpec,
}

/// A catalog entry with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Inequality {
    AmGmHm {
        weights: Vec<f64>,
        points: Vec<f64>,
    },
    PowerMean {
        weights: Vec<f64>,
        points: Vec<f64>,
        p: f64,
        q: f64,
    },
    Jensen {
        function: FunctionSpec,
        derivative: FunctionSpec,
        weights: Vec<f64>,
        points: Vec<f64>,
        convexity: Convexity,
    },
    ShiftedPowerGm {
        weights: Vec<f64>,
        points: Vec<f64>,
        k: f64,
        c: f64,
    },
    LogOverX {
        weights: Vec<f64>,
        points: Vec<f64>,
        variant: LogVariant,
    },
}

impl Inequality {
    /// Closed-form reports, one per inequality in the entry.
    pub fn reports(&self) -> Result<Vec<InequalityReport>, CatalogError> {
        Ok(match self {
            Inequality::AmGmHm { weights, points } => am_gm_hm(weights, points)?.to_vec(),
            Inequality::PowerMean {
                weights,
                points,
                p,
                q,
            } => vec![power_mean(weights, points, *p, *q)?],
            Inequality::Jensen {
                function,
                derivative,
                weights,
                points,
                convexity,
            } => vec![jensen(function, derivative, weights, points, *convexity)?],
            Inequality::ShiftedPowerGm {
                weights,
                points,
                k,
                c,
            } => {
                vec![shifted_power_gm(weights, points, *k, *c)?]
            }
            Inequality::LogOverX {
                weights,
                points,
                variant,
            } => vec![log_over_x(weights, points, *variant)?],
        })
    }

    /// Engine instances, aligned with [`Inequality::reports`].
    pub fn instances(&self, grid_size: usize) -> Result<Vec<TheoremInstance>, CatalogError> {
        let build = |name: &str, weights: &[FunctionSpec], points: &[f64], g: FunctionSpec| {
            Ok::<_, CatalogError>(TheoremInstance {
                name: name.to_string(),
                system: System::from_parts(points, weights, grid_size)?,
                g,
            })
        };
        let constants = |w: &[f64]| {
            w.iter()
                .map(|&c| FunctionSpec::constant(c))
                .collect::<Vec<_>>()
        };
        let over_x = |w: &[f64]| {
            w.iter()
                .map(|&c| power_capacity(c, 0.0))
                .collect::<Vec<_>>()
        };
        let parse = |src: String| FunctionSpec::parse(&src).expect("generated expression parses");
        let reciprocal = parse("1/x".into());

        Ok(match self {
            Inequality::AmGmHm { weights, points } => {
                check_entries(weights, points)?;
                vec![
                    build("AM >= GM", &constants(weights), points, reciprocal.clone())?,
                    build("GM >= HM", &over_x(weights), points, reciprocal)?,
                ]
            }
            Inequality::PowerMean {
                weights,
                points,
                p,
                q,
            } => {
                check_entries(weights, points)?;
                check_orders(*p, *q)?;
                let caps: Vec<_> = weights.iter().map(|&c| power_capacity(c, *p)).collect();
                vec![build(
                    &power_name(*p, *q),
                    &caps,
                    points,
                    parse(format!("x^({:?})", q - p)),
                )?]
            }
            Inequality::Jensen {
                derivative,
                weights,
                points,
                ..
            } => {
                check_entries(weights, points)?;
                vec![build(
                    "Jensen",
                    &constants(weights),
                    points,
                    derivative.clone(),
                )?]
            }
            Inequality::ShiftedPowerGm {
                weights,
                points,
                k,
                c,
            } => {
                check_entries(weights, points)?;
                check_shift(*k, *c)?;
                let g = parse(format!("{k:?}*x^{k:?}/(x^{k:?}+{c:?})"));
                vec![build("shifted power GM", &over_x(weights), points, g)?]
            }
            Inequality::LogOverX {
                weights,
                points,
                variant,
            } => {
                check_entries(weights, points)?;
                log_side(points, *variant)?;
                let (caps, g) = match variant {
                    LogVariant::GmSide => (over_x(weights), parse("(1-ln(x))/x".into())),
                    LogVariant::AmSide => (constants(weights), parse("(1-ln(x))/x^2".into())),
                };
                vec![build("ln(x)/x", &caps, points, g)?]
            }
        })
    }
}

/// A closed-form report next to the engine's verdict for the same instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub report: InequalityReport,
    pub verdict: FunctionalVerdict,
    /// The engine's sign confirms the report's relation.
    pub agrees: bool,
}

/// Runs every report of `entry` through the generic engine.
pub fn cross_check(entry: &Inequality, tols: &Tolerances) -> Result<Vec<CrossCheck>, CatalogError> {
    let reports = entry.reports()?;
    let instances = entry.instances(tols.grid_size)?;
    reports
        .into_iter()
        .zip(instances)
        .map(|(report, inst)| {
            let verdict = verify_theorem(&inst.system, &inst.g, tols)?;
            let side = match report.relation {
                Relation::Ge => verdict.value >= -verdict.error_bound,
                Relation::Le => verdict.value <= verdict.error_bound,
            };
            let agrees = report.holds && verdict.holds && side;
            Ok(CrossCheck {
                report,
                verdict,
                agrees,
            })
        })
        .collect()
}

fn finite(v: f64, what: &'static str) -> Result<f64, CatalogError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CatalogError::Overflow(what))
    }
}

fn weighted_average(weights: &[f64], values: impl Iterator<Item = f64>) -> f64 {
    let total: f64 = weights.iter().sum();
    weights.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / total
}

/// Sample positions, as fractions of the points' range, for the derivative
/// check.
const DERIVATIVE_PROBES: [f64; 5] = [0.05, 0.27, 0.5, 0.73, 0.95];

fn check_derivative(
    function: &FunctionSpec,
    derivative: &FunctionSpec,
    lo: f64,
    hi: f64,
) -> Result<(), CatalogError> {
    for t in DERIVATIVE_PROBES {
        let x = lo + t * (hi - lo);
        let h = (f64::EPSILON.cbrt() * x.max(1.0)).min(0.5 * x);
        let numeric = (function.evaluate(x + h)? - function.evaluate(x - h)?) / (2.0 * h);
        let supplied = derivative.evaluate(x)?;
        let roundoff = 16.0 * f64::EPSILON * function.evaluate(x)?.abs() / h;
        let tol = DERIVATIVE_REL_TOL * supplied.abs().max(numeric.abs()) + roundoff;
        if (supplied - numeric).abs() > tol {
            return Err(CatalogError::DerivativeMismatch {
                x,
                supplied,
                numeric,
            });
        }
    }
    Ok(())
}

/// `F(weighted AM) ≤ weighted mean of F(xᵢ)` for convex `F`, reversed for
/// concave `F`.
///
/// `derivative` must be `F′`: it is compared with a central difference at
/// five points and must be increasing (convex) or decreasing (concave) on
/// the points' range.
pub fn jensen(
    function: &FunctionSpec,
    derivative: &FunctionSpec,
    weights: &[f64],
    points: &[f64],
    convexity: Convexity,
) -> Result<InequalityReport, CatalogError> {
    check_entries(weights, points)?;
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    check_derivative(function, derivative, lo, hi)?;
    let class = classify_monotonicity(derivative, lo, hi, crate::exprlang::DEFAULT_GRID_SIZE)?;
    let found = match class {
        MonotonicityClass::Increasing => Some(Convexity::Convex),
        MonotonicityClass::Decreasing => Some(Convexity::Concave),
        MonotonicityClass::Constant => None,
        MonotonicityClass::NonMonotone { .. } => {
            return Err(CatalogError::ConvexityMismatch {
                declared: convexity,
                found: "not monotone",
            })
        }
    };
    if found.is_some_and(|c| c != convexity) {
        return Err(CatalogError::ConvexityMismatch {
            declared: convexity,
            found: if found == Some(Convexity::Convex) {
                "increasing"
            } else {
                "decreasing"
            },
        });
    }
    let am = closed_form_mean(MeanKind::Arithmetic, weights, points)?;
    let lhs = function.evaluate(am)?;
    let rhs = weighted_average(
        weights,
        points
            .iter()
            .map(|&x| function.evaluate(x))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter(),
    );
    let relation = match convexity {
        Convexity::Convex => Relation::Le,
        Convexity::Concave => Relation::Ge,
    };
    Ok(InequalityReport::new(
        format!("Jensen, {} F = {}", convexity.name(), function.source()),
        lhs,
        rhs,
        relation,
        "lhs = F(weighted AM), rhs = weighted mean of F(x_i); monotonicity of F' sampled",
    ))
}

/// `AM ≥ GM` and `GM ≥ HM`, the second by applying the first to the
/// reciprocals of the points.
pub fn am_gm_hm(weights: &[f64], points: &[f64]) -> Result<[InequalityReport; 2], CatalogError> {
    let am = closed_form_mean(MeanKind::Arithmetic, weights, points)?;
    let gm = closed_form_mean(MeanKind::Geometric, weights, points)?;
    let reciprocals: Vec<f64> = points.iter().map(|x| 1.0 / x).collect();
    let am_recip = closed_form_mean(MeanKind::Arithmetic, weights, &reciprocals)?;
    let gm_recip = closed_form_mean(MeanKind::Geometric, weights, &reciprocals)?;
    let hm = 1.0 / am_recip;
    let gm_via_recip = 1.0 / gm_recip;
    Ok([
        InequalityReport::new("AM >= GM", am, gm, Relation::Ge, "weighted means"),
        InequalityReport::new(
            "GM >= HM",
            gm_via_recip,
            hm,
            Relation::Ge,
            "AM >= GM applied to reciprocals",
        ),
    ])
}

fn check_orders(p: f64, q: f64) -> Result<(), CatalogError> {
    if !(p < q) || !p.is_finite() || !q.is_finite() {
        return Err(CatalogError::OrderNotIncreasing { p, q });
    }
    Ok(())
}

fn power_name(p: f64, q: f64) -> String {
    format!("M_{p} <= M_{q}")
}

/// `M_p ≤ M_q` for `p < q`; order 0 is the geometric mean.
pub fn power_mean(
    weights: &[f64],
    points: &[f64],
    p: f64,
    q: f64,
) -> Result<InequalityReport, CatalogError> {
    check_orders(p, q)?;
    let mp = closed_form_mean(MeanKind::of_order(p), weights, points)?;
    let mq = closed_form_mean(MeanKind::of_order(q), weights, points)?;
    Ok(InequalityReport::new(
        power_name(p, q),
        mp,
        mq,
        Relation::Le,
        "weighted power means; order 0 is the geometric mean",
    ))
}

fn check_shift(k: f64, c: f64) -> Result<(), CatalogError> {
    for (name, value) in [("k", k), ("c", c)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(CatalogError::NonPositiveParameter { name, value });
        }
    }
    Ok(())
}

/// `ln(y^k + c)` for `y > 0` without forming `y^k`.
fn ln_power_plus(ln_y: f64, k: f64, c: f64) -> f64 {
    let a = k * ln_y;
    let b = c.ln();
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// `(GM^k + c)^{C_T} ≤ ∏ (xᵢ^k + c)^{cᵢ}`, compared through logarithms.
pub fn shifted_power_gm(
    weights: &[f64],
    points: &[f64],
    k: f64,
    c: f64,
) -> Result<InequalityReport, CatalogError> {
    check_entries(weights, points)?;
    check_shift(k, c)?;
    let total: f64 = weights.iter().sum();
    let ln_gm = weights
        .iter()
        .zip(points)
        .map(|(w, x)| w * x.ln())
        .sum::<f64>()
        / total;
    let lhs = finite(total * ln_power_plus(ln_gm, k, c), "ln lhs")?;
    let rhs = finite(
        weights
            .iter()
            .zip(points)
            .map(|(w, x)| w * ln_power_plus(x.ln(), k, c))
            .sum(),
        "ln rhs",
    )?;
    Ok(InequalityReport::new(
        format!("(GM^{k} + {c})^C_T <= prod (x_i^{k} + {c})^c_i"),
        lhs,
        rhs,
        Relation::Le,
        "both sides are natural logarithms: lhs = C_T*ln(GM^k + c), rhs = sum c_i*ln(x_i^k + c)",
    ))
}

/// Which side of the variant's turning point the points lie on.
fn log_side(points: &[f64], variant: LogVariant) -> Result<Relation, CatalogError> {
    let threshold = match variant {
        LogVariant::GmSide => LOG_OVER_X_GM_THRESHOLD,
        LogVariant::AmSide => LOG_OVER_X_AM_THRESHOLD,
    };
    let lo = points.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= threshold {
        Ok(Relation::Ge)
    } else if lo >= threshold {
        Ok(Relation::Le)
    } else {
        Err(CatalogError::StraddlesThreshold { threshold })
    }
}

/// `ln(M)/M` against the weighted mean of `ln(xᵢ)/xᵢ`, with `M` the
/// geometric (`GmSide`) or arithmetic (`AmSide`) mean.
///
/// The relation is `>=` when every point is at or below the turning point of
/// the variant's `g` (`e²` for GM, `e^{3/2}` for AM) and `<=` when every
/// point is at or above it.
pub fn log_over_x(
    weights: &[f64],
    points: &[f64],
    variant: LogVariant,
) -> Result<InequalityReport, CatalogError> {
    check_entries(weights, points)?;
    let relation = log_side(points, variant)?;
    let (mean, name, note) = match variant {
        LogVariant::GmSide => (
            closed_form_mean(MeanKind::Geometric, weights, points)?,
            "ln(GM)/GM vs AM(ln(x)/x)",
            "g = (1-ln x)/x turns at e^2",
        ),
        LogVariant::AmSide => (
            closed_form_mean(MeanKind::Arithmetic, weights, points)?,
            "ln(AM)/AM vs AM(ln(x)/x)",
            "g = (1-ln x)/x^2 turns at e^(3/2); points in (e^(3/2), e^2) are on its increasing side",
        ),
    };
    let lhs = mean.ln() / mean;
    let rhs = weighted_average(weights, points.iter().map(|x| x.ln() / x));
    Ok(InequalityReport::new(name, lhs, rhs, relation, note))
}
