//! Insulated bodies with temperature-dependent heat capacities brought into
//! contact.
//!
//! The common final temperature is the balance root of the ensemble. Each
//! body's heat is `∫_{Tᵢ}^{T} Cᵢ` and its entropy change `∫_{Tᵢ}^{T} Cᵢ/x`;
//! the heats sum to zero and the entropy changes to something nonnegative.
//! Only end states are modelled.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{solve_equilibrium, EquilibriumError, System, SystemError};
use crate::exprlang::FunctionSpec;
use crate::functional::weighted_functional;
use crate::quadrature::QuadratureError;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    pub label: String,
    pub temperature: f64,
    pub capacity: FunctionSpec,
}

impl Body {
    pub fn new(label: impl Into<String>, temperature: f64, capacity: FunctionSpec) -> Body {
        Body {
            label: label.into(),
            temperature,
            capacity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyLedger {
    pub label: String,
    pub initial_temperature: f64,
    pub heat: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermoReport {
    pub t_eq: f64,
    /// In input order.
    pub per_body: Vec<BodyLedger>,
    pub total_heat: f64,
    pub total_entropy: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermoError {
    #[error("no bodies")]
    Empty,
    #[error("duplicate body label {0:?}")]
    DuplicateLabel(String),
    #[error("body {label:?}: {source}")]
    Body { label: String, source: SystemError },
    #[error("schedule has no stages")]
    EmptySchedule,
    #[error("schedule stage {stage} is empty")]
    EmptyStage { stage: usize },
    #[error("schedule stage {stage} names unknown body {label:?}")]
    UnknownLabel { stage: usize, label: String },
    #[error("final schedule stage must include every body; missing {missing:?}")]
    FinalStageIncomplete { missing: Vec<String> },
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn check_labels(bodies: &[Body]) -> Result<(), ThermoError> {
    if bodies.is_empty() {
        return Err(ThermoError::Empty);
    }
    let mut seen = BTreeSet::new();
    for b in bodies {
        if !seen.insert(b.label.as_str()) {
            return Err(ThermoError::DuplicateLabel(b.label.clone()));
        }
    }
    Ok(())
}

/// System over the given bodies at the given temperatures; input order is
/// preserved because the members are sorted beforehand.
fn group_system(
    members: &[(f64, &Body)],
    tols: &Tolerances,
) -> Result<(System, Vec<usize>), ThermoError> {
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| members[a].0.total_cmp(&members[b].0));
    let system = System::new(
        order
            .iter()
            .map(|&i| (members[i].0, members[i].1.capacity.clone()))
            .collect(),
        tols.grid_size,
    )
    .map_err(|source| {
        let label = source
            .index()
            .map(|i| members[order[i]].1.label.clone())
            .unwrap_or_default();
        ThermoError::Body { label, source }
    })?;
    Ok((system, order))
}

/// Heat and entropy for each member moving from its temperature to `t`,
/// in member order.
fn transfer(
    system: &System,
    order: &[usize],
    t: f64,
    tols: &Tolerances,
) -> Result<Vec<(f64, f64)>, ThermoError> {
    let one = FunctionSpec::constant(1.0);
    let reciprocal = FunctionSpec::parse("1/x").expect("static expression");
    let heat = weighted_functional(system, &one, t, tols)?;
    let entropy = weighted_functional(system, &reciprocal, t, tols)?;
    let mut out = vec![(0.0, 0.0); order.len()];
    for (k, &i) in order.iter().enumerate() {
        out[i] = (heat.terms[k].value, entropy.terms[k].value);
    }
    Ok(out)
}

/// Brings all bodies into contact at once.
pub fn equilibrate(bodies: &[Body], tols: &Tolerances) -> Result<ThermoReport, ThermoError> {
    check_labels(bodies)?;
    let members: Vec<(f64, &Body)> = bodies.iter().map(|b| (b.temperature, b)).collect();
    let (system, order) = group_system(&members, tols)?;
    let t_eq = solve_equilibrium(&system, tols)?.x0;
    let flows = transfer(&system, &order, t_eq, tols)?;
    Ok(report(bodies, t_eq, &flows))
}

fn report(bodies: &[Body], t_eq: f64, flows: &[(f64, f64)]) -> ThermoReport {
    let per_body: Vec<BodyLedger> = bodies
        .iter()
        .zip(flows)
        .map(|(b, &(heat, entropy))| BodyLedger {
            label: b.label.clone(),
            initial_temperature: b.temperature,
            heat,
            entropy,
        })
        .collect();
    ThermoReport {
        t_eq,
        total_heat: per_body.iter().map(|l| l.heat).sum(),
        total_entropy: per_body.iter().map(|l| l.entropy).sum(),
        per_body,
    }
}

/// Equilibrates the groups of `schedule` one after another; each group's
/// bodies take the group's common temperature. The last group must contain
/// every body. Ledgers accumulate over the stages.
pub fn staged_equilibrate(
    bodies: &[Body],
    schedule: &[Vec<String>],
    tols: &Tolerances,
) -> Result<ThermoReport, ThermoError> {
    check_labels(bodies)?;
    let Some(last) = schedule.last() else {
        return Err(ThermoError::EmptySchedule);
    };
    let index: HashMap<&str, usize> = bodies
        .iter()
        .enumerate()
        .map(|(i, b)| (b.label.as_str(), i))
        .collect();
    let mut stages = Vec::with_capacity(schedule.len());
    for (stage, group) in schedule.iter().enumerate() {
        if group.is_empty() {
            return Err(ThermoError::EmptyStage { stage });
        }
        let mut ids = BTreeSet::new();
        for label in group {
            let &i = index
                .get(label.as_str())
                .ok_or_else(|| ThermoError::UnknownLabel {
                    stage,
                    label: label.clone(),
                })?;
            ids.insert(i);
        }
        stages.push(ids.into_iter().collect::<Vec<_>>());
    }
    let covered: BTreeSet<&str> = last.iter().map(String::as_str).collect();
    let missing: Vec<String> = bodies
        .iter()
        .filter(|b| !covered.contains(b.label.as_str()))
        .map(|b| b.label.clone())
        .collect();
    if !missing.is_empty() {
        return Err(ThermoError::FinalStageIncomplete { missing });
    }

    let mut temps: Vec<f64> = bodies.iter().map(|b| b.temperature).collect();
    let mut flows = vec![(0.0, 0.0); bodies.len()];
    let mut t_eq = temps[0];
    for ids in &stages {
        let members: Vec<(f64, &Body)> = ids.iter().map(|&i| (temps[i], &bodies[i])).collect();
        let (system, order) = group_system(&members, tols)?;
        t_eq = solve_equilibrium(&system, tols)?.x0;
        for (k, (dq, ds)) in transfer(&system, &order, t_eq, tols)?
            .into_iter()
            .enumerate()
        {
            let i = ids[k];
            flows[i].0 += dq;
            flows[i].1 += ds;
            temps[i] = t_eq;
        }
    }
    Ok(report(bodies, t_eq, &flows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(label: &str, t: f64, c: &str) -> Body {
        Body::new(label, t, FunctionSpec::parse(c).unwrap())
    }

    #[test]
    fn two_unit_bodies() {
        let r = equilibrate(
            &[body("a", 1.0, "1"), body("b", 3.0, "1")],
            &Tolerances::default(),
        )
        .unwrap();
        assert!((r.t_eq - 2.0).abs() < 1e-9);
        assert!((r.per_body[0].heat - 1.0).abs() < 1e-9);
        assert!((r.per_body[1].heat + 1.0).abs() < 1e-9);
        assert!((r.per_body[0].entropy - 2f64.ln()).abs() < 1e-9);
        assert!((r.per_body[1].entropy - (2.0f64 / 3.0).ln()).abs() < 1e-9);
        assert!((r.total_entropy - (4.0f64 / 3.0).ln()).abs() < 1e-9);
        assert!(r.total_heat.abs() < 1e-9);
    }

    #[test]
    fn single_body_is_inert() {
        let r = equilibrate(&[body("a", 5.0, "x^2")], &Tolerances::default()).unwrap();
        assert_eq!(r.t_eq, 5.0);
        assert_eq!((r.total_heat, r.total_entropy), (0.0, 0.0));
    }

    #[test]
    fn equal_temperatures_give_exact_zeros() {
        let bodies = [
            body("a", 4.0, "x"),
            body("b", 4.0, "exp(x)"),
            body("c", 4.0, "2/x"),
        ];
        let r = equilibrate(&bodies, &Tolerances::default()).unwrap();
        assert_eq!(r.t_eq, 4.0);
        assert_eq!(r.total_entropy, 0.0);
        assert!(r.per_body.iter().all(|l| l.heat == 0.0 && l.entropy == 0.0));
    }

    #[test]
    fn ledger_keeps_input_order() {
        let r = equilibrate(
            &[body("hot", 9.0, "1"), body("cold", 1.0, "1")],
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(r.per_body[0].label, "hot");
        assert!(r.per_body[0].heat < 0.0 && r.per_body[1].heat > 0.0);
    }

    #[test]
    fn staged_matches_direct() {
        let t = Tolerances::default();
        let bodies = [
            body("1", 1.0, "1"),
            body("2", 3.0, "1"),
            body("3", 5.0, "1"),
        ];
        let all: Vec<String> = ["1", "2", "3"].map(String::from).to_vec();
        let staged =
            staged_equilibrate(&bodies, &[vec!["1".into(), "2".into()], all.clone()], &t).unwrap();
        let direct = equilibrate(&bodies, &t).unwrap();
        assert!((staged.t_eq - 3.0).abs() < 1e-9);
        assert!((staged.t_eq - direct.t_eq).abs() < 1e-9);
        let single = staged_equilibrate(&bodies, &[all], &t).unwrap();
        assert_eq!(single, direct);
    }

    #[test]
    fn staged_order_does_not_matter() {
        let t = Tolerances::default();
        let bodies = [
            body("a", 0.5, "x^2"),
            body("b", 3.0, "1/x"),
            body("c", 7.0, "2"),
        ];
        let all: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let ab =
            staged_equilibrate(&bodies, &[vec!["a".into(), "b".into()], all.clone()], &t).unwrap();
        let bc = staged_equilibrate(&bodies, &[vec!["c".into(), "b".into()], all], &t).unwrap();
        assert!((ab.t_eq - bc.t_eq).abs() <= 10.0 * t.root_tol);
        // Entropy is a state function; staging only changes the route.
        assert!((ab.total_entropy - bc.total_entropy).abs() < 1e-8);
    }

    #[test]
    fn schedule_errors() {
        let t = Tolerances::default();
        let bodies = [body("a", 1.0, "1"), body("b", 2.0, "1")];
        assert_eq!(
            staged_equilibrate(&bodies, &[], &t),
            Err(ThermoError::EmptySchedule)
        );
        assert!(matches!(
            staged_equilibrate(&bodies, &[vec!["a".into(), "z".into()]], &t),
            Err(ThermoError::UnknownLabel { stage: 0, .. })
        ));
        assert!(matches!(
            staged_equilibrate(&bodies, &[vec!["a".into()]], &t),
            Err(ThermoError::FinalStageIncomplete { .. })
        ));
        assert!(matches!(
            staged_equilibrate(&bodies, &[vec![], vec!["a".into(), "b".into()]], &t),
            Err(ThermoError::EmptyStage { stage: 0 })
        ));
        assert!(matches!(
            equilibrate(&[body("a", 1.0, "1"), body("a", 2.0, "1")], &t),
            Err(ThermoError::DuplicateLabel(_))
        ));
        assert!(matches!(
            equilibrate(&[body("a", 1.0, "1"), body("b", 4.0, "x-2")], &t),
            Err(ThermoError::Body { ref label, .. }) if label == "b"
        ));
        assert_eq!(equilibrate(&[], &t), Err(ThermoError::Empty));
    }
}
