use proptest::prelude::*;
use std::sync::Arc;
use torsionlab::expr::parse_expr;
use torsionlab::fixtures::load_fixture;
use torsionlab::genfunc::{GenIsotopy, MorseType};
use torsionlab::indices::{
    compare_isotopies, isotopy_index, lefschetz_index, linking_number, PlanarIsotopy, Provenance, Relation,
};
use torsionlab::{Mat2, Rect, Vec2};

fn linear_without_unit_eigenvalue() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(-3.0..3.0f64)
        .prop_map(|[a, b, c, d]| Mat2::new(a, b, c, d))
        .prop_filter("eigenvalue near 1", |m| m.sub(&Mat2::IDENTITY).det().abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lefschetz_is_the_sign_of_det(l in linear_without_unit_eigenvalue()) {
        let expected = l.sub(&Mat2::IDENTITY).det().signum() as i64;
        prop_assert_eq!(lefschetz_index(|z| Ok(l.apply(z)), Vec2::ZERO, 1.0, 256).unwrap(), expected);
    }
}

fn cubic() -> (GenIsotopy, Vec<Vec2>) {
    let g = Arc::new(parse_expr("x^2 - y^2 + 0.3*x^3 + 0.2*x*y").unwrap());
    let region = Rect::new(-3.0, 1.5, -1.5, 1.5);
    let gen = GenIsotopy::new(g, 0.5, region).unwrap();
    let points = gen.find_critical_points(region, 80).unwrap().into_iter().map(|c| c.location).collect();
    (gen, points)
}

#[test]
fn linking_is_symmetric_and_shifts_under_turns() {
    let (gen, points) = cubic();
    let iso = PlanarIsotopy::from_genfunc(&gen);
    assert!(points.len() >= 2);
    let (z0, z1) = (points[0], points[1]);
    let base = linking_number(&iso, z0, z1, 64).unwrap();
    assert_eq!(base, linking_number(&iso, z1, z0, 64).unwrap());
    for k in 1..=3 {
        assert_eq!(linking_number(&iso.compose_turns(z0, k), z0, z1, 64).unwrap(), base + k);
    }
}

#[test]
fn compare_is_antisymmetric() {
    let s = load_fixture("appA_quadratic").unwrap();
    let iso = s.system.isotopy.unwrap();
    let turned = iso.compose_turns(Vec2::ZERO, 1);
    let ab = compare_isotopies(&iso, &turned, Vec2::ZERO, 0.5, 6).unwrap();
    let ba = compare_isotopies(&turned, &iso, Vec2::ZERO, 0.5, 6).unwrap();
    assert_eq!((ab.relation, ba.relation), (Relation::Less, Relation::Greater));
    assert!((ab.min_gap - 1.0).abs() < 1e-9 && (ab.max_gap - 1.0).abs() < 1e-9);
    assert!((ab.min_gap + ba.max_gap).abs() < 1e-12);
}

#[test]
fn isotopy_index_is_stable_under_halving() {
    let (gen, points) = cubic();
    let iso = PlanarIsotopy::from_genfunc(&gen);
    let critical = gen.find_critical_points(Rect::new(-3.0, 1.5, -1.5, 1.5), 80).unwrap();
    for c in critical.iter().filter(|c| c.morse_type != MorseType::Degenerate) {
        assert_eq!(
            isotopy_index(&iso, c.location, 0.04, 32).unwrap(),
            isotopy_index(&iso, c.location, 0.02, 32).unwrap(),
            "at {}",
            c.location
        );
    }
    assert!(!points.is_empty());
    for (name, r) in [("appA_quadratic", 0.5), ("ex1_homothety", 1.0), ("ex2_piecewise_flow", 1.0)] {
        let iso = load_fixture(name).unwrap().system.isotopy.unwrap();
        assert_eq!(
            isotopy_index(&iso, Vec2::ZERO, r, 32).unwrap(),
            isotopy_index(&iso, Vec2::ZERO, r / 2.0, 32).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn saddle_generating_function_relations() {
    let g = Arc::new(parse_expr("x^2 - y^2").unwrap());
    let gen = GenIsotopy::new(g.clone(), 0.5, Rect::new(-2.0, 2.0, -2.0, 2.0)).unwrap();
    let iso = PlanarIsotopy::from_genfunc(&gen);
    let f = torsionlab::foliate::gradient_foliation(g);
    let r = torsionlab::indices::index_relation_check(&iso, &f, Vec2::ZERO, 0.5, 64).unwrap();
    assert_eq!((r.foliation, r.isotopy, r.lefschetz), (-1, -2, -1));
    assert!(r.foliation_equals_isotopy_plus_one);
    assert_eq!(r.lefschetz_equals_foliation, Some(true));
}

#[test]
fn user_isotopies_must_start_at_the_identity() {
    let bad = PlanarIsotopy::new(Provenance::UserExpression("z + 1".into()), None, |_, z| Ok(z + Vec2::new(1.0, 0.0)));
    assert!(bad.is_err());
}
