mod common;

use common::{polynomial_text, POLY_TERMS};
use proptest::prelude::*;
use torsionlab::expr::parse_expr;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn polynomial_jets_match_finite_differences(
        coeffs in prop::collection::vec(-2.0..2.0f64, POLY_TERMS),
        x in -1.5..1.5f64,
        y in -1.5..1.5f64,
    ) {
        let e = parse_expr(&polynomial_text(&coeffs)).unwrap();
        let jet = e.eval_jet2(x, y).unwrap();
        let h = 1e-5;
        let f = |a: f64, b: f64| e.eval(a, b).unwrap();
        let g = |a: f64, b: f64| e.eval_jet2(a, b).unwrap().grad;
        let fd = [(f(x + h, y) - f(x - h, y)) / (2.0 * h), (f(x, y + h) - f(x, y - h)) / (2.0 * h)];
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-4 * a.abs().max(b.abs()).max(1.0);
        prop_assert!(close(jet.grad[0], fd[0]) && close(jet.grad[1], fd[1]), "{:?} vs {:?}", jet.grad, fd);
        let hx = [(g(x + h, y)[0] - g(x - h, y)[0]) / (2.0 * h), (g(x + h, y)[1] - g(x - h, y)[1]) / (2.0 * h)];
        let hy = (g(x, y + h)[1] - g(x, y - h)[1]) / (2.0 * h);
        prop_assert!(close(jet.hess[0][0], hx[0]));
        prop_assert!(close(jet.hess[0][1], hx[1]) && close(jet.hess[1][0], hx[1]));
        prop_assert!(close(jet.hess[1][1], hy));
    }

    #[test]
    fn evaluation_is_bitwise_deterministic(
        coeffs in prop::collection::vec(-2.0..2.0f64, POLY_TERMS),
        x in -3.0..3.0f64,
        y in -3.0..3.0f64,
    ) {
        let text = format!("sin({}) * exp(-(x^2)/4) + log(1 + y^2)", polynomial_text(&coeffs));
        let a = parse_expr(&text).unwrap().eval_jet2(x, y).unwrap();
        let b = parse_expr(&text).unwrap().eval_jet2(x, y).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.grad.map(f64::to_bits), b.grad.map(f64::to_bits));
        prop_assert_eq!(a.hess.concat().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                        b.hess.concat().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    }
}

#[test]
fn display_round_trips() {
    for text in ["x^2 - 3*x*y + y^-2", "select(x < y, sin(x), cos(y))", "max(x, 2) / sqrt(1 + y^2)", "-(x - pi)^3"] {
        let e = parse_expr(text).unwrap();
        let again = parse_expr(&e.to_string()).unwrap();
        for &(x, y) in &[(0.3, 0.7), (1.2, -0.4), (-2.0, 1.5)] {
            assert_eq!(e.eval(x, y).unwrap().to_bits(), again.eval(x, y).unwrap().to_bits(), "{text}");
        }
    }
}
