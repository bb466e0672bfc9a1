mod common;

use common::gen_coeffs;
use proptest::prelude::*;
use std::sync::Arc;
use torsionlab::expr::parse_expr;
use torsionlab::fixtures::load_fixture;
use torsionlab::genfunc::GenIsotopy;
use torsionlab::{Rect, Vec2};

fn point() -> impl Strategy<Value = Vec2> {
    (-1.5..1.5f64, -1.5..1.5f64).prop_map(|(x, y)| Vec2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn area_and_orientation_are_preserved(g in gen_coeffs(), t in 0.0..=1.0f64, z in point()) {
        let det = g.isotopy().gf_jacobian(t, z).unwrap().det();
        prop_assert!((det - 1.0).abs() <= 1e-9, "det = {det}");
        prop_assert!(det > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobian_matches_finite_differences(g in gen_coeffs(), t in 0.05..=1.0f64, z in point()) {
        let iso = g.isotopy();
        let j = iso.gf_jacobian(t, z).unwrap();
        let h = 1e-6;
        let dx = (iso.gf_apply(t, z + Vec2::new(h, 0.0)).unwrap() - iso.gf_apply(t, z - Vec2::new(h, 0.0)).unwrap()).scale(0.5 / h);
        let dy = (iso.gf_apply(t, z + Vec2::new(0.0, h)).unwrap() - iso.gf_apply(t, z - Vec2::new(0.0, h)).unwrap()).scale(0.5 / h);
        let scale = j.max_abs().max(1.0);
        for (a, b) in [(j.a, dx.x), (j.c, dx.y), (j.b, dy.x), (j.d, dy.y)] {
            prop_assert!((a - b).abs() <= 1e-5 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn time_zero_is_the_identity(g in gen_coeffs(), z in point()) {
        prop_assert_eq!(g.isotopy().gf_apply(0.0, z).unwrap(), z);
    }

    #[test]
    fn residuals_contract_after_two_steps(g in gen_coeffs(), t in 0.0..=1.0f64, z in point()) {
        let s = g.isotopy().solve(t, z).unwrap();
        if !s.used_fallback {
            prop_assert!(s.residuals.windows(2).skip(1).all(|w| w[1] <= w[0]), "{:?}", s.residuals);
        }
    }
}

#[test]
fn fixed_points_are_the_critical_points() {
    let g = Arc::new(parse_expr("x^2 - y^2 + 0.3*x^3 + 0.2*x*y").unwrap());
    let region = Rect::new(-1.5, 1.5, -1.5, 1.5);
    let iso = GenIsotopy::new(g, 0.5, region).unwrap();
    let critical = iso.find_critical_points(region, 120).unwrap();
    assert!(!critical.is_empty());
    for c in &critical {
        assert!((iso.gf_apply(1.0, c.location).unwrap() - c.location).norm() < 1e-10);
    }
    // Away from the critical points nothing is fixed.
    for i in 0..30 {
        for j in 0..30 {
            let z = Vec2::new(-1.45 + 0.1 * i as f64, -1.45 + 0.1 * j as f64);
            if critical.iter().all(|c| (c.location - z).norm() > 0.05) {
                assert!((iso.gf_apply(1.0, z).unwrap() - z).norm() > 1e-6, "{z}");
            }
        }
    }
}

#[test]
fn quadratic_fixture_has_a_single_fixed_point() {
    let s = load_fixture("appA_quadratic").unwrap();
    let gen = s.system.genfunc.unwrap();
    let critical = gen.find_critical_points(Rect::new(-1.0, 1.0, -1.0, 1.0), 40).unwrap();
    assert_eq!(critical.len(), 1);
    assert!(critical[0].location.norm() < 1e-12);
    assert!((gen.gf_apply(1.0, critical[0].location).unwrap()).norm() < 1e-12);
}

#[test]
fn half_quadratic_min_det() {
    use torsionlab::foliate::{gradient_foliation, sample_path, transversality_report, Verdict};
    use torsionlab::indices::PlanarIsotopy;
    let g = Arc::new(parse_expr("(x^2 + y^2)/2").unwrap());
    let gen = GenIsotopy::new(g.clone(), 0.5, Rect::new(-2.0, 2.0, -2.0, 2.0)).unwrap();
    let alt = PlanarIsotopy::from_genfunc_alternate(&gen);
    let path = sample_path(|t| alt.eval(t, Vec2::new(1.0, 0.0)), 4000).unwrap();
    let report = transversality_report(&path, &gradient_foliation(g), 1e-12).unwrap();
    assert_eq!(report.verdict, Verdict::PositivelyTransverse);
    assert!((report.min_det - 2.0).abs() < 1e-6, "{}", report.min_det);
}
