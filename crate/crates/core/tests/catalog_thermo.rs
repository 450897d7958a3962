use equilib::catalog::{
    am_gm_hm, cross_check, jensen, log_over_x, power_mean, shifted_power_gm, CatalogError,
    Convexity, Inequality, LogVariant, Relation,
};
use equilib::exprlang::FunctionSpec;
use equilib::thermo::{equilibrate, staged_equilibrate, Body, ThermoError};
use equilib::Tolerances;
use proptest::collection::vec;
use proptest::prelude::*;

fn f(src: &str) -> FunctionSpec {
    FunctionSpec::parse(src).unwrap()
}

fn entries() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|n| (vec(0.1f64..10.0, n), vec(0.1f64..50.0, n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jensen_ignores_weight_scale((w, x) in entries(), s in 0.01f64..100.0) {
        let scaled: Vec<f64> = w.iter().map(|c| c * s).collect();
        let a = jensen(&f("x^2"), &f("2*x"), &w, &x, Convexity::Convex).unwrap();
        let b = jensen(&f("x^2"), &f("2*x"), &scaled, &x, Convexity::Convex).unwrap();
        prop_assert!((a.lhs - b.lhs).abs() <= 1e-9 * a.lhs && (a.rhs - b.rhs).abs() <= 1e-9 * a.rhs);
        prop_assert!(a.holds && b.holds);
    }

    #[test]
    fn power_means_are_ordered((w, x) in entries(), p in -3.0f64..3.0, d1 in 0.01f64..2.0, d2 in 0.01f64..2.0) {
        let (q, r) = (p + d1, p + d1 + d2);
        let pq = power_mean(&w, &x, p, q).unwrap();
        let qr = power_mean(&w, &x, q, r).unwrap();
        let pr = power_mean(&w, &x, p, r).unwrap();
        prop_assert!(pq.holds && qr.holds && pr.holds);
        prop_assert_eq!(pq.rhs, qr.lhs);
        prop_assert!(pr.slack >= pq.slack.min(qr.slack) - 1e-9 * pr.rhs);
    }

    #[test]
    fn am_gm_hm_chain((w, x) in entries()) {
        let [a, b] = am_gm_hm(&w, &x).unwrap();
        prop_assert!(a.holds && b.holds);
        prop_assert!((a.rhs - b.lhs).abs() <= 1e-12 * a.rhs);
    }

    #[test]
    fn shifted_gm_holds((w, x) in entries(), k in 0.01f64..5.0, c in 0.01f64..5.0) {
        prop_assert!(shifted_power_gm(&w, &x, k, c).unwrap().holds);
    }

    #[test]
    fn thermo_laws(temps in vec(0.1f64..50.0, 1..6), caps in vec(0usize..5, 6)) {
        let shapes = ["1", "2*x", "1/x", "3 + x^2/100", "exp(x/25)"];
        let bodies: Vec<Body> = temps
            .iter()
            .enumerate()
            .map(|(i, &t)| Body::new(format!("b{i}"), t, f(shapes[caps[i]])))
            .collect();
        let r = equilibrate(&bodies, &Tolerances::default()).unwrap();
        let (lo, hi) = temps.iter().fold((f64::INFINITY, 0f64), |(l, h), &t| (l.min(t), h.max(t)));
        let n = temps.len() as f64;
        prop_assert!(lo <= r.t_eq && r.t_eq <= hi);
        prop_assert!(r.total_heat.abs() <= n * 1e-10 + 1e-9);
        prop_assert!(r.total_entropy >= -n * 1e-10);
        // A body loses heat exactly when it started above t_eq.
        for b in &r.per_body {
            prop_assert!(b.heat * (r.t_eq - b.initial_temperature) >= 0.0);
        }
    }
}

#[test]
fn catalog_examples() {
    let [a, b] = am_gm_hm(&[1.0, 1.0], &[1.0, 4.0]).unwrap();
    assert_eq!((a.lhs, a.rhs, b.rhs), (2.5, 2.0, 1.6));
    let r = power_mean(&[1.0, 1.0], &[1.0, 4.0], 1.0, 2.0).unwrap();
    assert_eq!(r.relation, Relation::Le);
    assert!(r.holds && (r.rhs - 8.5f64.sqrt()).abs() <= 1e-12);
    assert!(matches!(
        power_mean(&[1.0], &[1.0], 2.0, 1.0),
        Err(CatalogError::OrderNotIncreasing { .. })
    ));
    let r = log_over_x(&[1.0, 1.0], &[1.0, 4.0], LogVariant::GmSide).unwrap();
    assert_eq!(r.relation, Relation::Ge);
    let r = log_over_x(&[1.0, 1.0], &[10.0, 40.0], LogVariant::GmSide).unwrap();
    assert_eq!(r.relation, Relation::Le);
    assert!(r.holds);
    assert!(matches!(
        log_over_x(&[1.0, 1.0], &[1.0, 20.0], LogVariant::GmSide),
        Err(CatalogError::StraddlesThreshold { .. })
    ));
    // Between e^(3/2) and e^2 the AM variant is on its increasing side.
    assert!(matches!(
        log_over_x(&[1.0, 1.0], &[2.0, 6.0], LogVariant::AmSide),
        Err(CatalogError::StraddlesThreshold { .. })
    ));
    assert!(
        log_over_x(&[1.0, 1.0], &[2.0, 6.0], LogVariant::GmSide)
            .unwrap()
            .holds
    );
}

#[test]
fn cross_check_confirms_every_entry() {
    let tols = Tolerances::default();
    let (w, x) = (vec![1.0, 2.0, 0.5], vec![1.5, 3.0, 4.0]);
    let entries = [
        Inequality::AmGmHm {
            weights: w.clone(),
            points: x.clone(),
        },
        Inequality::PowerMean {
            weights: w.clone(),
            points: x.clone(),
            p: -1.5,
            q: 2.5,
        },
        Inequality::Jensen {
            function: f("exp(x)"),
            derivative: f("exp(x)"),
            weights: w.clone(),
            points: x.clone(),
            convexity: Convexity::Convex,
        },
        Inequality::ShiftedPowerGm {
            weights: w.clone(),
            points: x.clone(),
            k: 2.0,
            c: 3.0,
        },
        Inequality::LogOverX {
            weights: w,
            points: x,
            variant: LogVariant::AmSide,
        },
    ];
    for entry in &entries {
        let checks = cross_check(entry, &tols).unwrap();
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.agrees), "{checks:?}");
    }
}

#[test]
fn thermo_examples() {
    let tols = Tolerances::default();
    let two = [Body::new("a", 1.0, f("1")), Body::new("b", 3.0, f("1"))];
    let r = equilibrate(&two, &tols).unwrap();
    assert!((r.t_eq - 2.0).abs() <= 1e-9);
    assert!((r.per_body[0].heat - 1.0).abs() <= 1e-9 && (r.per_body[1].heat + 1.0).abs() <= 1e-9);
    assert!((r.total_entropy - (4.0f64 / 3.0).ln()).abs() <= 1e-9);

    let one = equilibrate(&[Body::new("solo", 5.0, f("x"))], &tols).unwrap();
    assert_eq!(
        (one.t_eq, one.total_heat, one.total_entropy),
        (5.0, 0.0, 0.0)
    );

    let three = [
        Body::new("1", 1.0, f("1")),
        Body::new("2", 3.0, f("1")),
        Body::new("3", 5.0, f("1")),
    ];
    let schedule = vec![
        vec!["1".to_string(), "2".to_string()],
        vec!["1".into(), "2".into(), "3".into()],
    ];
    let staged = staged_equilibrate(&three, &schedule, &tols).unwrap();
    assert!((staged.t_eq - 3.0).abs() <= 1e-9);
    assert!((staged.t_eq - equilibrate(&three, &tols).unwrap().t_eq).abs() <= 1e-8);

    let bad = vec![
        vec!["1".to_string(), "9".to_string()],
        vec!["1".into(), "2".into(), "3".into()],
    ];
    assert!(matches!(
        staged_equilibrate(&three, &bad, &tols),
        Err(ThermoError::UnknownLabel { .. })
    ));
}
