//! Equilibrium points of weighted integral balances.
//!
//! Given points `0 < x₁ ≤ … ≤ xₙ` and positive weight functions `fᵢ`, the
//! balance `F(x) = Σᵢ ∫_{xᵢ}^{x} fᵢ` has exactly one root `x0` in
//! `[x₁, xₙ]`. At that root the functional `Σᵢ ∫_{xᵢ}^{x0} fᵢ·g` is
//! nonnegative for every decreasing `g` and nonpositive for every increasing
//! `g`. This crate computes `x0`, evaluates and checks that functional, and
//! derives from it a catalog of classical inequalities and a model of
//! bodies reaching a common temperature.

pub mod catalog;
pub mod cli;
pub mod draws;
pub mod equilibrium;
pub mod exprlang;
pub mod functional;
pub mod quadrature;
pub mod sweep;
pub mod thermo;
pub mod tolerances;

pub use equilibrium::{
    balance, closed_form_mean, solve_equilibrium, EquilibriumResult, MeanKind, System,
};
pub use exprlang::FunctionSpec;
pub use functional::{
    classify_monotonicity, verify_theorem, weighted_functional, FunctionalVerdict,
    MonotonicityClass,
};
pub use quadrature::{integrate, IntegralResult};
pub use tolerances::Tolerances;
