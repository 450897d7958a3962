//! Bodies with temperature-dependent heat capacities brought into contact.

use equilib::thermo::{equilibrate, Body};
use equilib::{FunctionSpec, Tolerances};

fn main() {
    let cap = |s: &str| FunctionSpec::parse(s).unwrap();
    let bodies = [
        Body::new("water", 290.0, cap("4.2")),
        Body::new("copper", 420.0, cap("0.39 + 1e-4*x")),
        Body::new("ice-cold gas", 120.0, cap("0.7*(x/300)^0.3")),
    ];
    let r = equilibrate(&bodies, &Tolerances::default()).unwrap();
    println!("common temperature {:.9}", r.t_eq);
    println!(
        "{:<14} {:>8} {:>14} {:>14}",
        "body", "T0", "heat in", "entropy"
    );
    for b in &r.per_body {
        println!(
            "{:<14} {:>8} {:>14.6} {:>14.9}",
            b.label, b.initial_temperature, b.heat, b.entropy
        );
    }
    println!(
        "{:<14} {:>8} {:>14.1e} {:>14.9}",
        "total", "", r.total_heat, r.total_entropy
    );
}
