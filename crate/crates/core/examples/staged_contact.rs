//! Contact in stages ends at the same temperature as contact all at once.

use equilib::thermo::{equilibrate, staged_equilibrate, Body};
use equilib::{FunctionSpec, Tolerances};

fn main() {
    let tols = Tolerances::default();
    let cap = |s: &str| FunctionSpec::parse(s).unwrap();
    let bodies = [
        Body::new("a", 1.0, cap("1")),
        Body::new("b", 3.0, cap("x")),
        Body::new("c", 5.0, cap("2/x")),
        Body::new("d", 8.0, cap("1 + sqrt(x)")),
    ];
    let direct = equilibrate(&bodies, &tols).unwrap();
    println!(
        "all at once:        t = {:.12}  entropy {:.9}",
        direct.t_eq, direct.total_entropy
    );

    let group = |labels: &[&str]| labels.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let schedules = [
        vec![group(&["a", "b"]), group(&["a", "b", "c", "d"])],
        vec![
            group(&["c", "d"]),
            group(&["a", "d"]),
            group(&["a", "b", "c", "d"]),
        ],
        vec![group(&["b", "c", "d"]), group(&["a", "b", "c", "d"])],
    ];
    for s in &schedules {
        let r = staged_equilibrate(&bodies, s, &tols).unwrap();
        println!(
            "{:<19} t = {:.12}  entropy {:.9}  |dt| = {:.1e}",
            format!("{} stages:", s.len()),
            r.t_eq,
            r.total_entropy,
            (r.t_eq - direct.t_eq).abs()
        );
    }
}
