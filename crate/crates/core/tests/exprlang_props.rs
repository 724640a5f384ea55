use proptest::prelude::*;
use regulab::exprlang::{parse, Func, Node};

fn poly_text(c: &[f64]) -> String {
    c.iter()
        .enumerate()
        .map(|(i, &ci)| {
            let coef = if ci < 0.0 { format!("({ci:?})") } else { format!("{ci:?}") };
            match i {
                0 => coef,
                1 => format!("{coef}*v"),
                _ => format!("{coef}*v^{i}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Symbolic k-th derivative of Σ cᵢvⁱ at v, and the sum of absolute terms as a scale.
fn poly_derivative(c: &[f64], k: usize, v: f64) -> (f64, f64) {
    let mut value = 0.0;
    let mut scale = 0.0;
    for (i, &ci) in c.iter().enumerate().skip(k) {
        let falling: f64 = (0..k).map(|j| (i - j) as f64).product();
        let term = ci * falling * v.powi((i - k) as i32);
        value += term;
        scale += term.abs();
    }
    (value, scale)
}

fn node_strategy() -> impl Strategy<Value = Node> {
    let leaf = prop_oneof![
        Just(Node::Var),
        (0.0f64..1e6).prop_map(Node::Const),
        (0u32..20).prop_map(|n| Node::Const(n as f64)),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let func = prop_oneof![
            Just(Func::Exp),
            Just(Func::Ln),
            Just(Func::Sin),
            Just(Func::Cos),
            Just(Func::Tanh),
            Just(Func::Sqrt),
        ];
        prop_oneof![
            inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Div(Box::new(a), Box::new(b))),
            (inner.clone(), -8.0f64..8.0).prop_map(|(a, p)| Node::Pow(Box::new(a), p)),
            (inner.clone(), -3i32..6).prop_map(|(a, p)| Node::Pow(Box::new(a), p as f64)),
            (func, inner).prop_map(|(f, a)| Node::Call(f, Box::new(a))),
        ]
    })
}

const SMOOTH: [&str; 5] = [
    "exp(sin(v))*v",
    "tanh(v) + ln(v^2 + 1)",
    "sqrt(v^2 + 2)*cos(v)",
    "v^3/(1 + v^2) - 0.5*v",
    "exp(-(v/2)^2)/(2*sqrt(pi))",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn polynomial_jets_match_symbolic(
        c in prop::collection::vec(-10.0f64..10.0, 1..=6),
        v in -3.0f64..3.0,
    ) {
        let e = parse(&poly_text(&c), "v").unwrap();
        let j = e.eval_jet3(v).unwrap();
        for (k, got) in [j.f, j.d1, j.d2, j.d3].into_iter().enumerate() {
            let (want, scale) = poly_derivative(&c, k, v);
            prop_assert!((got - want).abs() <= 1e-13 * scale.max(1e-300) + f64::MIN_POSITIVE,
                "order {k}: {got} vs {want}");
        }
    }

    #[test]
    fn jets_match_finite_differences(which in 0usize..SMOOTH.len(), v in -2.0f64..2.0) {
        let e = parse(SMOOTH[which], "v").unwrap();
        let h = 1e-5;
        let f = |x: f64| e.eval(x).unwrap();
        let j = e.eval_jet3(v).unwrap();
        let d1 = (f(v + h) - f(v - h)) / (2.0 * h);
        let d2 = (f(v + h) - 2.0 * f(v) + f(v - h)) / (h * h);
        prop_assert!((d1 - j.d1).abs() <= 1e-7 * j.d1.abs().max(1.0), "{d1} vs {}", j.d1);
        prop_assert!((d2 - j.d2).abs() <= 1e-4 * j.d2.abs().max(1.0), "{d2} vs {}", j.d2);
    }

    #[test]
    fn print_parse_round_trip(node in node_strategy()) {
        let text = regulab::exprlang::print_node(&node, "v");
        let back = parse(&text, "v").unwrap();
        prop_assert_eq!(back.root(), &node, "{}", text);
    }
}
