//! Randomized parser/printer invariants.

use proptest::prelude::*;

use qineq::expr::{parse, Ast, BinOp, Expression, Func};
use qineq::qcore::RealFn;

fn ast_strategy() -> impl Strategy<Value = Ast> {
    let leaf = prop_oneof![
        (0.1f64..10.0).prop_map(Ast::Num),
        Just(Ast::Var),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let bin = prop_oneof![
            Just(BinOp::Add),
            Just(BinOp::Sub),
            Just(BinOp::Mul),
            Just(BinOp::Div),
            Just(BinOp::Pow),
        ];
        let call = prop_oneof![
            Just(Func::Ln),
            Just(Func::Exp),
            Just(Func::Sqrt),
            Just(Func::Abs),
            Just(Func::Sin),
            Just(Func::Cos),
        ];
        prop_oneof![
            (bin, inner.clone(), inner.clone())
                .prop_map(|(op, l, r)| Ast::Bin(op, Box::new(l), Box::new(r))),
            (call, inner.clone()).prop_map(|(f, a)| Ast::Call(f, Box::new(a))),
            inner.prop_map(|a| Ast::Neg(Box::new(a))),
        ]
    })
}

proptest! {
    /// Printing an expression and parsing it back preserves its value at
    /// every point (including which points are domain errors).
    #[test]
    fn print_parse_round_trip(ast in ast_strategy(), x in 0.0f64..3.0) {
        let original = Expression::new(ast);
        let reparsed = parse(&original.to_string())
            .unwrap_or_else(|e| panic!("printed form {:?} failed to parse: {e}", original.to_string()));
        match (original.eval(x), reparsed.eval(x)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "eval disagreement at x = {x}: {a:?} vs {b:?}"),
        }
    }

    /// A successful evaluation never returns a non-finite number.
    #[test]
    fn eval_success_is_finite(ast in ast_strategy(), x in 0.0f64..3.0) {
        let expr = Expression::new(ast);
        if let Ok(v) = expr.eval(x) {
            prop_assert!(v.is_finite());
        }
    }
}

#[test]
fn implicit_multiplication_is_rejected() {
    for src in ["2 x", "2(x + 1)", "(x)(x)", "x x"] {
        assert!(parse(src).is_err(), "{src:?} should not parse");
    }
}
