//! Closed-form weighted means.
//!
//! With constant capacities `cᵢ` the balance root is the weighted arithmetic
//! mean; with `cᵢ·x^(p−1)` it is the weighted power mean `M_p`, and with
//! `cᵢ/x` the weighted geometric mean.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Power(f64),
}

impl MeanKind {
    /// `M_p` with `p = 0` read as the geometric mean.
    pub fn of_order(p: f64) -> MeanKind {
        if p == 0.0 {
            MeanKind::Geometric
        } else {
            MeanKind::Power(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeanError {
    #[error("no entries")]
    Empty,
    #[error("{weights} weights but {points} points")]
    LengthMismatch { weights: usize, points: usize },
    #[error("{which}[{index}] = {value} is not a positive finite number")]
    NonPositive {
        which: &'static str,
        index: usize,
        value: f64,
    },
    #[error("power mean order must be nonzero and finite, got {0}")]
    InvalidOrder(f64),
}

pub(crate) fn check_entries(weights: &[f64], points: &[f64]) -> Result<(), MeanError> {
    if weights.len() != points.len() {
        return Err(MeanError::LengthMismatch {
            weights: weights.len(),
            points: points.len(),
        });
    }
    if weights.is_empty() {
        return Err(MeanError::Empty);
    }
    for (which, list) in [("weights", weights), ("points", points)] {
        if let Some((index, &value)) = list
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(MeanError::NonPositive {
                which,
                index,
                value,
            });
        }
    }
    Ok(())
}

/// `ln Σ wᵢ·exp(aᵢ)` without overflow.
fn log_weighted_sum_exp(weights: &[f64], exponents: impl Iterator<Item = f64> + Clone) -> f64 {
    let peak = exponents.clone().fold(f64::NEG_INFINITY, f64::max);
    let scaled: f64 = weights
        .iter()
        .zip(exponents)
        .map(|(w, a)| w * (a - peak).exp())
        .sum();
    peak + scaled.ln()
}

/// Weighted arithmetic, geometric, harmonic or `p`-power mean.
pub fn closed_form_mean(kind: MeanKind, weights: &[f64], points: &[f64]) -> Result<f64, MeanError> {
    check_entries(weights, points)?;
    let total: f64 = weights.iter().sum();
    let mean = match kind {
        MeanKind::Arithmetic => weights.iter().zip(points).map(|(w, x)| w * x).sum::<f64>() / total,
        MeanKind::Geometric => (weights
            .iter()
            .zip(points)
            .map(|(w, x)| w * x.ln())
            .sum::<f64>()
            / total)
            .exp(),
        MeanKind::Harmonic => total / weights.iter().zip(points).map(|(w, x)| w / x).sum::<f64>(),
        MeanKind::Power(p) => {
            if p == 0.0 || !p.is_finite() {
                return Err(MeanError::InvalidOrder(p));
            }
            let log_mean =
                log_weighted_sum_exp(weights, points.iter().map(|x| p * x.ln())) - total.ln();
            (log_mean / p).exp()
        }
    };
    Ok(mean)
}
