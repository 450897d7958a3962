//! Sign of the weighted functional for decreasing, increasing and
//! non-monotone `g`.

use equilib::functional::proof_split;
use equilib::{verify_theorem, FunctionSpec, System, Tolerances};

fn main() {
    let tols = Tolerances::default();
    let parse = |s: &str| FunctionSpec::parse(s).unwrap();
    let system = System::from_parts(
        &[0.5, 2.0, 3.0, 12.0],
        &[parse("1"), parse("1/x"), parse("x^2"), parse("2")],
        tols.grid_size,
    )
    .unwrap();

    println!(
        "{:<16} {:<14} {:>9} {:>22} {:>10} holds",
        "g", "class", "expected", "S(g)", "bound"
    );
    for g in [
        "1/x",
        "exp(-x)",
        "1/(1+x)",
        "x",
        "x^2",
        "ln(1+x)",
        "(1-ln(x))/x",
    ] {
        let v = verify_theorem(&system, &parse(g), &tols).unwrap();
        let class = serde_json::to_value(v.g_class).unwrap()["class"]
            .as_str()
            .unwrap()
            .to_string();
        println!(
            "{g:<16} {class:<14} {:>9} {:>22.15} {:>10.1e} {}",
            v.expected_sign.symbol(),
            v.value,
            v.error_bound,
            v.holds
        );
    }

    // Each body on its own already satisfies the inequality against g(x0).
    let g = parse("1/x");
    let v = verify_theorem(&system, &g, &tols).unwrap();
    for t in proof_split(&system, &g, v.x0, &v.g_class, &tols).unwrap() {
        println!(
            "x_i = {:>5}: term {:>10.6} >= g(x0)*int f_i = {:>10.6}: {}",
            t.point, t.term, t.anchor, t.holds
        );
    }
}
