//! Parse weight expressions, render them back and evaluate them.

use equilib::FunctionSpec;

fn main() {
    for src in [
        "2*x^2 + 3*x + 1",
        "-x^2",
        "exp(-x) * ln(1 + x)",
        "1/(1 + x)^2",
        "sqrt(x) / pi",
    ] {
        let f = FunctionSpec::parse(src).expect("valid expression");
        println!(
            "{src:<24} renders as {:<24} f(2) = {}",
            f.render(),
            f.evaluate(2.0).unwrap()
        );
    }

    for bad in ["sin(x)", "x +", "2 ** x", "ln(x"] {
        println!("{bad:<24} -> {}", FunctionSpec::parse(bad).unwrap_err());
    }

    let f = FunctionSpec::parse("ln(x - 3)").unwrap();
    println!(
        "ln(x - 3) at x = 2      -> {}",
        f.evaluate(2.0).unwrap_err()
    );
}
