use equilib::draws::{draw_system, instance_rng, WeightFamily};
use equilib::equilibrium::{balance, solve_equilibrium, System};
use equilib::exprlang::FunctionSpec;
use equilib::functional::{proof_split, weighted_functional, ExpectedSign};
use equilib::quadrature::{integrate, Integrator};
use equilib::{classify_monotonicity, verify_theorem, MonotonicityClass, Tolerances};
use proptest::prelude::*;

fn f(src: &str) -> FunctionSpec {
    FunctionSpec::parse(src).unwrap()
}

const INTEGRANDS: [&str; 6] = [
    "1/x",
    "exp(-x)*x",
    "sqrt(x)",
    "ln(1+x)",
    "x^3 - 2*x",
    "1/(1+x^2)",
];

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn integrals_are_additive(k in 0usize..6, a in 0.1f64..50.0, b in 0.1f64..50.0, c in 0.1f64..50.0) {
        let g = f(INTEGRANDS[k]);
        let ab = integrate(&g, a, b, 1e-11).unwrap();
        let bc = integrate(&g, b, c, 1e-11).unwrap();
        let ac = integrate(&g, a, c, 1e-11).unwrap();
        let slack = ab.error_bound + bc.error_bound + ac.error_bound + 1e-12;
        prop_assert!((ab.value + bc.value - ac.value).abs() <= slack);
    }

    #[test]
    fn integrals_are_linear_and_oriented(k in 0usize..6, a in 0.1f64..50.0, b in 0.1f64..50.0, s in 0.1f64..10.0) {
        let g = f(INTEGRANDS[k]);
        let q = Integrator::new(1e-11);
        let base = q.integrate(&g, a, b).unwrap();
        let scaled = q.integrate(&g.scaled(s), a, b).unwrap();
        let reversed = q.integrate(&g, b, a).unwrap();
        prop_assert!((scaled.value - s * base.value).abs() <= scaled.error_bound + s * base.error_bound + 1e-12);
        prop_assert_eq!(reversed.value, -base.value);
    }

    #[test]
    fn root_is_bracketed_and_unique(seed in any::<u64>()) {
        let tols = Tolerances::default();
        let system = draw_system(&mut instance_rng(seed, 0), WeightFamily::WithExponential)
            .system(tols.grid_size)
            .unwrap();
        let eq = solve_equilibrium(&system, &tols).unwrap();
        prop_assert!(system.lo() <= eq.x0 && eq.x0 <= system.hi());
        if system.lo() < system.hi() {
            // F is increasing, so it is negative left of the root and positive right of it.
            let d = 1e-6 * (system.hi() - system.lo());
            if eq.x0 - d >= system.lo() {
                prop_assert!(balance(&system, eq.x0 - d, &tols).unwrap().value < 0.0);
            }
            if eq.x0 + d <= system.hi() {
                prop_assert!(balance(&system, eq.x0 + d, &tols).unwrap().value > 0.0);
            }
        }
    }

    #[test]
    fn root_ignores_weight_scale_and_input_order(seed in any::<u64>(), s in 0.01f64..100.0) {
        let tols = Tolerances::default();
        let draw = draw_system(&mut instance_rng(seed, 1), WeightFamily::Powers);
        let system = draw.system(tols.grid_size).unwrap();
        let x0 = solve_equilibrium(&system, &tols).unwrap().x0;
        let scaled = solve_equilibrium(&system.scaled(s), &tols).unwrap().x0;
        let specs: Vec<FunctionSpec> = draw.weights.iter().rev().map(|w| w.spec()).collect();
        let points: Vec<f64> = draw.points.iter().rev().copied().collect();
        let reversed = System::from_parts(&points, &specs, tols.grid_size).unwrap();
        let reordered = solve_equilibrium(&reversed, &tols).unwrap().x0;
        prop_assert!((x0 - scaled).abs() <= 1e-8 * x0);
        prop_assert!((x0 - reordered).abs() <= 1e-8 * x0);
    }

    #[test]
    fn functional_is_linear_in_g(seed in any::<u64>(), a in -5.0f64..5.0) {
        let tols = Tolerances::default();
        let system = draw_system(&mut instance_rng(seed, 2), WeightFamily::Powers).system(tols.grid_size).unwrap();
        let x0 = solve_equilibrium(&system, &tols).unwrap().x0;
        let s = |g: &str| weighted_functional(&system, &f(g), x0, &tols).unwrap();
        let combined = s(&format!("({a:?})*(1/x) + exp(-x)"));
        let (s1, s2) = (s("1/x"), s("exp(-x)"));
        let bound = combined.error_bound + a.abs() * s1.error_bound + s2.error_bound + 1e-12;
        prop_assert!((combined.value - (a * s1.value + s2.value)).abs() <= bound);
    }

    #[test]
    fn constant_g_gives_zero(seed in any::<u64>(), c in 0.1f64..10.0) {
        let tols = Tolerances::default();
        let system = draw_system(&mut instance_rng(seed, 3), WeightFamily::Powers).system(tols.grid_size).unwrap();
        let v = verify_theorem(&system, &FunctionSpec::constant(c), &tols).unwrap();
        prop_assert_eq!(v.g_class, MonotonicityClass::Constant);
        prop_assert_eq!(v.expected_sign, ExpectedSign::Zero);
        prop_assert!(v.holds, "{:?}", v);
    }

    #[test]
    fn proof_split_terms_hold_and_sum(seed in any::<u64>(), k in 0usize..2) {
        let tols = Tolerances::default();
        let system = draw_system(&mut instance_rng(seed, 4), WeightFamily::Powers).system(tols.grid_size).unwrap();
        let x0 = solve_equilibrium(&system, &tols).unwrap().x0;
        let g = f(["1/(1+x)", "x^2"][k]);
        let class = classify_monotonicity(&g, system.lo(), system.hi(), tols.grid_size).unwrap();
        let split = proof_split(&system, &g, x0, &class, &tols).unwrap();
        prop_assert!(split.iter().all(|t| t.holds), "{:?}", split);
        let total = weighted_functional(&system, &g, x0, &tols).unwrap();
        let sum: f64 = split.iter().map(|t| t.term).sum();
        prop_assert!((sum - total.value).abs() <= total.error_bound + 1e-12);
    }
}

#[test]
fn reference_examples() {
    let tols = Tolerances::default();
    let sys = |w: &[&str], x: &[f64]| {
        let w: Vec<_> = w.iter().map(|s| f(s)).collect();
        System::from_parts(x, &w, 1001).unwrap()
    };
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    assert!(near(
        solve_equilibrium(&sys(&["1", "1"], &[1.0, 3.0]), &tols)
            .unwrap()
            .x0,
        2.0
    ));
    assert!(near(
        solve_equilibrium(&sys(&["1/x", "1/x"], &[1.0, 4.0]), &tols)
            .unwrap()
            .x0,
        2.0
    ));
    assert!(near(
        solve_equilibrium(&sys(&["x", "x"], &[1.0, 7.0]), &tols)
            .unwrap()
            .x0,
        5.0
    ));
    assert!(near(
        solve_equilibrium(&sys(&["1/x^2", "1/x^2"], &[1.0, 4.0]), &tols)
            .unwrap()
            .x0,
        1.6
    ));
    assert_eq!(
        solve_equilibrium(&sys(&["x^3"], &[7.5]), &tols).unwrap().x0,
        7.5
    );

    let s = sys(&["1", "1"], &[1.0, 3.0]);
    let v = verify_theorem(&s, &f("1/x"), &tols).unwrap();
    assert!(v.holds && (v.value - (4.0f64 / 3.0).ln()).abs() <= 1e-9);
    let v = verify_theorem(&s, &f("x"), &tols).unwrap();
    assert!(v.holds && (v.value + 1.0).abs() <= 1e-9);
}

#[test]
fn non_monotone_g_makes_no_claim() {
    let tols = Tolerances::default();
    let s = System::from_parts(&[1.0, 20.0], &[f("1"), f("1")], 1001).unwrap();
    let v = verify_theorem(&s, &f("(1-ln(x))/x"), &tols).unwrap();
    assert!(matches!(v.g_class, MonotonicityClass::NonMonotone { .. }));
    assert_eq!(v.expected_sign, ExpectedSign::Unspecified);
}

#[test]
fn invalid_systems_are_rejected() {
    assert!(System::from_parts(&[], &[], 11).is_err());
    assert!(System::from_parts(&[1.0, 2.0], &[f("1")], 11).is_err());
    assert!(System::from_parts(&[0.0, 2.0], &[f("1"), f("1")], 11).is_err());
    assert!(System::from_parts(&[1.0, 3.0], &[f("x - 2"), f("1")], 11).is_err());
    assert!(System::from_parts(&[1.0, 3.0], &[f("ln(x - 2)"), f("1")], 11).is_err());
}
