//! Equilibrium points of a few systems, compared with the weighted means
//! they reduce to.

use equilib::equilibrium::{power_capacity, verify_closed_form};
use equilib::{solve_equilibrium, FunctionSpec, System, Tolerances};

fn main() {
    let tols = Tolerances::default();
    let parse = |s: &str| FunctionSpec::parse(s).unwrap();

    let mixed = System::from_parts(
        &[1.0, 2.5, 9.0],
        &[parse("1"), parse("x"), parse("exp(-x/4)")],
        tols.grid_size,
    )
    .unwrap();
    let eq = solve_equilibrium(&mixed, &tols).unwrap();
    println!(
        "mixed weights: x0 = {:.15} after {} steps, F(x0) = {:.1e}, bracket {:?}",
        eq.x0, eq.iterations, eq.residual, eq.bracket
    );

    // Weights c·x^(p-1) put the root at the weighted power mean of order p.
    let (weights, points) = ([1.0, 2.0, 0.5], [1.0, 4.0, 16.0]);
    for p in [-1.0, 0.0, 1.0, 2.0, 0.5] {
        let check = verify_closed_form(p, &weights, &points, &tols).unwrap();
        println!(
            "p = {p:>4}: weight {:<12} numeric {:.12} closed form {:.12} gap {:.1e}",
            power_capacity(1.0, p).render(),
            check.numeric,
            check.closed_form,
            check.difference
        );
    }
}
