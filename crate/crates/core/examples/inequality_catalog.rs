//! Each catalog inequality in closed form and confirmed by the engine.

use equilib::catalog::{cross_check, Convexity, Inequality, LogVariant};
use equilib::{FunctionSpec, Tolerances};

fn main() {
    let tols = Tolerances::default();
    let (w, x) = (vec![1.0, 3.0, 2.0], vec![1.2, 2.0, 4.0]);
    let entries = vec![
        Inequality::AmGmHm {
            weights: w.clone(),
            points: x.clone(),
        },
        Inequality::PowerMean {
            weights: w.clone(),
            points: x.clone(),
            p: -1.0,
            q: 3.0,
        },
        Inequality::Jensen {
            function: FunctionSpec::parse("exp(x)").unwrap(),
            derivative: FunctionSpec::parse("exp(x)").unwrap(),
            weights: w.clone(),
            points: x.clone(),
            convexity: Convexity::Convex,
        },
        Inequality::ShiftedPowerGm {
            weights: w.clone(),
            points: x.clone(),
            k: 2.0,
            c: 0.5,
        },
        Inequality::LogOverX {
            weights: w.clone(),
            points: x.clone(),
            variant: LogVariant::GmSide,
        },
        Inequality::LogOverX {
            weights: w,
            points: vec![9.0, 20.0, 35.0],
            variant: LogVariant::AmSide,
        },
    ];
    for entry in &entries {
        for c in cross_check(entry, &tols).unwrap() {
            let r = &c.report;
            println!(
                "{:<34} {:>14.10} {} {:<14.10} slack {:>9.2e}  engine S = {:>10.3e}  agrees: {}",
                r.name,
                r.lhs,
                r.relation.symbol(),
                r.rhs,
                r.slack,
                c.verdict.value,
                c.agrees
            );
        }
    }

    let straddling = Inequality::LogOverX {
        weights: vec![1.0, 1.0],
        points: vec![1.0, 20.0],
        variant: LogVariant::GmSide,
    };
    println!(
        "\nstraddling e^2: {}",
        cross_check(&straddling, &tols).unwrap_err()
    );
}
