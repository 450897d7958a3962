//! Adaptive Simpson integration with an error bound.

use equilib::quadrature::Integrator;
use equilib::FunctionSpec;

fn main() {
    let q = Integrator::new(1e-12);
    let cases = [
        ("1/x", 1.0, std::f64::consts::E, 1.0),
        (
            "x*exp(-x)",
            0.5,
            20.0,
            1.5 * (-0.5f64).exp() - 21.0 * (-20.0f64).exp(),
        ),
        ("sqrt(x)", 1.0, 4.0, 14.0 / 3.0),
        ("1/x", 4.0, 1.0, -(4.0f64).ln()),
    ];
    println!(
        "{:<10} {:>6} {:>6} {:>22} {:>10} {:>10} {:>6}",
        "f", "a", "b", "value", "error", "bound", "panels"
    );
    for (src, a, b, exact) in cases {
        let f = FunctionSpec::parse(src).unwrap();
        let r = q.integrate(&f, a, b).unwrap();
        println!(
            "{src:<10} {a:>6.2} {b:>6.2} {:>22.16} {:>10.1e} {:>10.1e} {:>6}",
            r.value,
            (r.value - exact).abs(),
            r.error_bound,
            r.subdivisions
        );
    }

    // Closures integrate the same way.
    let r = q.integrate_fn(|x| Ok(x.sin().powi(2)), 0.5, 3.0).unwrap();
    println!(
        "sin^2 on [0.5, 3] = {} (bound {:.1e})",
        r.value, r.error_bound
    );
}
