//! Single-variable function expressions used for capacities and weights.
//!
//! A [`FunctionSpec`] is parsed once and is immutable afterwards. Evaluation
//! is restricted to `x > 0` and never returns a non-finite value: every
//! operation that would leave the reals or overflow is reported as an
//! [`EvalError`].

mod ast;
mod parser;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use ast::{BinOp, Constant, Expr, Func};
pub use parser::{ParseError, ParseErrorKind};

/// Default number of samples used by sampled checks (positivity,
/// monotonicity).
pub const DEFAULT_GRID_SIZE: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("logarithm of nonpositive value {0}")]
    LogOfNonPositive(f64),
    #[error("square root of negative value {0}")]
    SqrtOfNegative(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to negative power {0}")]
    ZeroToNegativePower(f64),
    #[error("negative base {base} raised to non-integer power {exponent}")]
    NonRealPower { base: f64, exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error at x = {x}: {kind}")]
    Domain { x: f64, kind: DomainError },
    #[error("non-finite value at x = {x}")]
    Overflow { x: f64 },
    #[error("argument x = {x} is not a positive real")]
    NonPositiveArgument { x: f64 },
}

impl EvalError {
    /// The abscissa at which evaluation failed.
    pub fn x(&self) -> f64 {
        match *self {
            EvalError::Domain { x, .. }
            | EvalError::Overflow { x }
            | EvalError::NonPositiveArgument { x } => x,
        }
    }
}

/// A parsed expression together with the text it came from.
#[derive(Debug, Clone)]
pub struct FunctionSpec {
    source: Arc<str>,
    ast: Arc<Expr>,
}

impl PartialEq for FunctionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl FunctionSpec {
    pub fn parse(src: &str) -> Result<FunctionSpec, ParseError> {
        let ast = parser::parse_expr(src)?;
        Ok(FunctionSpec {
            source: src.into(),
            ast: Arc::new(ast),
        })
    }

    /// Parses raw bytes; invalid UTF-8 is reported at the first bad byte.
    pub fn parse_bytes(src: &[u8]) -> Result<FunctionSpec, ParseError> {
        match std::str::from_utf8(src) {
            Ok(s) => FunctionSpec::parse(s),
            Err(e) => Err(ParseError {
                offset: e.valid_up_to(),
                kind: ParseErrorKind::InvalidUtf8,
            }),
        }
    }

    /// Wraps an existing tree; the source text is its rendering.
    pub fn from_ast(ast: Expr) -> FunctionSpec {
        FunctionSpec {
            source: ast.to_string().into(),
            ast: Arc::new(ast),
        }
    }

    /// The constant function `value`. `value` must be finite and nonnegative.
    pub fn constant(value: f64) -> FunctionSpec {
        assert!(
            value.is_finite() && value >= 0.0,
            "constant {value} out of range"
        );
        FunctionSpec::from_ast(Expr::Lit(value))
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    /// Canonical text of the tree; parses back to an identical tree.
    pub fn render(&self) -> String {
        self.ast.to_string()
    }

    /// `self * other` as a new expression.
    pub fn product(&self, other: &FunctionSpec) -> FunctionSpec {
        FunctionSpec::from_ast(Expr::binary(
            BinOp::Mul,
            (*self.ast).clone(),
            (*other.ast).clone(),
        ))
    }

    /// `factor * self`. `factor` must be finite and nonnegative.
    pub fn scaled(&self, factor: f64) -> FunctionSpec {
        FunctionSpec::constant(factor).product(self)
    }

    /// Value at `x > 0`.
    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(EvalError::NonPositiveArgument { x });
        }
        eval(&self.ast, x)
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl std::str::FromStr for FunctionSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FunctionSpec::parse(s)
    }
}

fn finite(v: f64, x: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Overflow { x })
    }
}

/// Evaluates a tree at `x` without the positivity precondition on `x`.
pub fn eval(e: &Expr, x: f64) -> Result<f64, EvalError> {
    let domain = |kind| EvalError::Domain { x, kind };
    match e {
        Expr::Lit(v) => Ok(*v),
        Expr::Var => Ok(x),
        Expr::Const(c) => Ok(c.value()),
        Expr::Neg(inner) => Ok(-eval(inner, x)?),
        Expr::Call(func, arg) => {
            let a = eval(arg, x)?;
            match func {
                Func::Ln if a <= 0.0 => Err(domain(DomainError::LogOfNonPositive(a))),
                Func::Ln => finite(a.ln(), x),
                Func::Sqrt if a < 0.0 => Err(domain(DomainError::SqrtOfNegative(a))),
                Func::Sqrt => finite(a.sqrt(), x),
                Func::Exp => finite(a.exp(), x),
            }
        }
        Expr::Binary(op, l, r) => {
            let a = eval(l, x)?;
            let b = eval(r, x)?;
            match op {
                BinOp::Add => finite(a + b, x),
                BinOp::Sub => finite(a - b, x),
                BinOp::Mul => finite(a * b, x),
                BinOp::Div if b == 0.0 => Err(domain(DomainError::DivisionByZero)),
                BinOp::Div => finite(a / b, x),
                BinOp::Pow => {
                    if a == 0.0 && b < 0.0 {
                        Err(domain(DomainError::ZeroToNegativePower(b)))
                    } else if a < 0.0 && b.fract() != 0.0 {
                        Err(domain(DomainError::NonRealPower {
                            base: a,
                            exponent: b,
                        }))
                    } else {
                        finite(a.powf(b), x)
                    }
                }
            }
        }
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive; the last point is
/// exactly `b`. A single point grid is `[a]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (b - a) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| {
        if i + 1 == n && n > 1 {
            b
        } else {
            a + step * i as f64
        }
    })
}

/// First grid point where `f` is not strictly positive, with its value.
///
/// This is a sampling check: it inspects `grid_size` uniformly spaced
/// points of `[a, b]` and nothing in between.
pub fn find_nonpositive(
    f: &FunctionSpec,
    a: f64,
    b: f64,
    grid_size: usize,
) -> Result<Option<(f64, f64)>, EvalError> {
    for x in uniform_grid(a, b, grid_size) {
        let v = f.evaluate(x)?;
        if v <= 0.0 {
            return Ok(Some((x, v)));
        }
    }
    Ok(None)
}

/// Whether `f > 0` at every point of a uniform `grid_size`-point grid over
/// `[a, b]`. Sampled, not proven.
pub fn check_positive(
    f: &FunctionSpec,
    a: f64,
    b: f64,
    grid_size: usize,
) -> Result<bool, EvalError> {
    Ok(find_nonpositive(f, a, b, grid_size)?.is_none())
}
