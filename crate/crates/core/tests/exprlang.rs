use equilib::exprlang::{BinOp, Constant, Expr, Func, FunctionSpec, ParseErrorKind};
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| Expr::Lit(n as f64 / 8.0)),
        (0.0f64..1e6).prop_map(Expr::Lit),
        Just(Expr::Var),
        Just(Expr::Const(Constant::E)),
        Just(Expr::Const(Constant::Pi)),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        let op = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow)
        ];
        let func = prop_oneof![Just(Func::Ln), Just(Func::Exp), Just(Func::Sqrt)];
        prop_oneof![
            (op, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            inner.clone().prop_map(Expr::neg),
            (func, inner).prop_map(|(f, a)| Expr::call(f, a)),
        ]
    })
}

proptest! {
    #[test]
    fn parser_is_total_on_text(s in "\\PC{0,40}") {
        let _ = FunctionSpec::parse(&s);
    }

    #[test]
    fn parser_is_total_on_grammar_soup(s in "[x0-9.eE+\\-*/^() lnexpsqrtpi,]{0,40}") {
        let _ = FunctionSpec::parse(&s);
    }

    #[test]
    fn parser_is_total_on_bytes(b in proptest::collection::vec(any::<u8>(), 0..40)) {
        let _ = FunctionSpec::parse_bytes(&b);
    }

    #[test]
    fn render_round_trips(e in arb_expr(), x in 0.01f64..100.0) {
        let spec = FunctionSpec::from_ast(e.clone());
        let reparsed = FunctionSpec::parse(&spec.render()).expect("rendered text parses");
        prop_assert_eq!(reparsed.ast(), &e);
        match (spec.evaluate(x), reparsed.evaluate(x)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn evaluation_is_finite_or_error(e in arb_expr(), x in 0.01f64..100.0) {
        if let Ok(v) = FunctionSpec::from_ast(e).evaluate(x) {
            prop_assert!(v.is_finite());
        }
    }
}

#[test]
fn precedence_and_associativity() {
    let v = |s: &str| FunctionSpec::parse(s).unwrap().evaluate(2.0).unwrap();
    assert_eq!(v("-x^2"), -4.0);
    assert_eq!(v("2^3^2"), 512.0);
    assert_eq!(v("1 - x - 1"), -2.0);
    assert_eq!(v("8 / x / 2"), 2.0);
    assert_eq!(v("2*x^2 + 3*x + 1"), 15.0);
    assert_eq!(v("log(e)"), 1.0);
    assert_eq!(v("1.5e1"), 15.0);
}

#[test]
fn errors_carry_offsets() {
    let e = FunctionSpec::parse("x + sin").unwrap_err();
    assert_eq!(e.offset, 4);
    assert!(matches!(e.kind, ParseErrorKind::UnknownIdentifier(_)));
    let e = FunctionSpec::parse("(x + 1").unwrap_err();
    assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
    assert!(FunctionSpec::parse("").is_err());
    assert!(FunctionSpec::parse("x x").is_err());
}

#[test]
fn deep_nesting_is_rejected_not_overflowed() {
    let deep = format!("{}x{}", "(".repeat(100_000), ")".repeat(100_000));
    assert!(matches!(
        FunctionSpec::parse(&deep).unwrap_err().kind,
        ParseErrorKind::TooDeep
    ));
    let chain = vec!["x"; 100_000].join("*");
    assert!(FunctionSpec::parse(&chain).is_err());
    let negs = format!("{}x", "-".repeat(100_000));
    assert!(FunctionSpec::parse(&negs).is_err());
}

#[test]
fn domain_errors_are_reported() {
    let f = |s: &str| FunctionSpec::parse(s).unwrap();
    assert!(f("ln(x - 5)").evaluate(1.0).is_err());
    assert!(f("sqrt(x - 5)").evaluate(1.0).is_err());
    assert!(f("1/(x - 1)").evaluate(1.0).is_err());
    assert!(f("exp(x)").evaluate(1000.0).is_err());
    assert!(f("x").evaluate(0.0).is_err());
    assert!(f("x").evaluate(-1.0).is_err());
}
