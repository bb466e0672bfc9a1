use std::f64::consts::PI;
use std::sync::Arc;
use torsionlab::expr::{parse_expr, ScalarField};
use torsionlab::fixtures::ex5::{phi_direct, Sin2Field};
use torsionlab::fixtures::load_fixture;
use torsionlab::foliate::{
    classify_singularity, gradient_foliation, sample_path, transversality_report, Foliation, SingularityClass, Verdict,
};
use torsionlab::genfunc::{find_critical_points, GenIsotopy, MorseType};
use torsionlab::indices::{isotopy_index, PlanarIsotopy};
use torsionlab::{Rect, Vec2};

const CUBIC: &str = "x^2 - y^2 + 0.3*x^3 + 0.2*x*y";

fn morse_index(m: MorseType) -> Option<i64> {
    match m {
        MorseType::Min | MorseType::Max => Some(1),
        MorseType::Saddle => Some(-1),
        MorseType::Degenerate => None,
    }
}

#[test]
fn gradient_index_follows_the_hessian() {
    for text in [CUBIC, "x^2 + y^2", "x^2 - y^2", "-(x^2) - 2*y^2 + x^3", "sin(2*x)*sin(2*y)"] {
        let g: Arc<dyn ScalarField> = Arc::new(parse_expr(text).unwrap());
        let f = gradient_foliation(g.clone());
        for c in find_critical_points(g.as_ref(), Rect::new(-1.5, 1.5, -1.5, 1.5), 80).unwrap() {
            let Some(expected) = morse_index(c.morse_type) else { continue };
            let s = classify_singularity(&f, c.location, 0.02, 128).unwrap();
            assert_eq!(s.foliation_index, expected, "{text} at {}", c.location);
        }
    }
}

#[test]
fn foliation_index_is_isotopy_index_plus_one() {
    let g: Arc<dyn ScalarField> = Arc::new(parse_expr(CUBIC).unwrap());
    let region = Rect::new(-3.0, 1.5, -1.5, 1.5);
    let gen = GenIsotopy::new(g.clone(), 0.5, region).unwrap();
    let iso = PlanarIsotopy::from_genfunc(&gen);
    let f = gradient_foliation(g);
    let critical = gen.find_critical_points(region, 80).unwrap();
    assert!(critical.len() >= 2);
    for c in critical.iter().filter(|c| c.morse_type != MorseType::Degenerate) {
        let fi = classify_singularity(&f, c.location, 0.02, 128).unwrap().foliation_index;
        assert_eq!(fi, isotopy_index(&iso, c.location, 0.02, 64).unwrap() + 1, "at {}", c.location);
    }
}

#[test]
fn denser_sampling_keeps_transverse_verdicts() {
    for name in ["appA_quadratic", "ex5_sin2_genfunc"] {
        let s = load_fixture(name).unwrap();
        let alt = s.system.alternate.unwrap();
        let f = s.system.foliation.unwrap();
        for k in 0..6 {
            let z = Vec2::new(0.11 + 0.07 * k as f64, 0.13 + 0.12 * k as f64);
            let coarse = transversality_report(&sample_path(|t| alt.eval(t, z), 64).unwrap(), &f, 1e-12).unwrap();
            let fine = transversality_report(&sample_path(|t| alt.eval(t, z), 128).unwrap(), &f, 1e-12).unwrap();
            if coarse.verdict == Verdict::PositivelyTransverse {
                assert_eq!(fine.verdict, Verdict::PositivelyTransverse, "{name} at {z}");
            }
        }
    }
}

#[test]
fn reversal_swaps_sinks_and_sources() {
    let cases: [(&str, SingularityClass, SingularityClass); 3] = [
        ("x^2 + y^2", SingularityClass::Source, SingularityClass::Sink),
        ("-(x^2) - y^2", SingularityClass::Sink, SingularityClass::Source),
        ("x^2 - y^2", SingularityClass::Saddle, SingularityClass::Saddle),
    ];
    for (text, forward, backward) in cases {
        let f = gradient_foliation(Arc::new(parse_expr(text).unwrap()));
        let a = classify_singularity(&f, Vec2::ZERO, 0.5, 64).unwrap();
        let b = classify_singularity(&f.reversed(), Vec2::ZERO, 0.5, 64).unwrap();
        assert_eq!((a.class, b.class), (forward, backward), "{text}");
        assert_eq!(a.foliation_index, b.foliation_index);
    }
    let spiral = Foliation::new("spiral", |z: Vec2| Ok(z.perp() - z.scale(0.2)));
    let a = classify_singularity(&spiral, Vec2::ZERO, 1.0, 64).unwrap();
    let b = classify_singularity(&spiral.reversed(), Vec2::ZERO, 1.0, 64).unwrap();
    assert_eq!((a.class, b.class), (SingularityClass::Sink, SingularityClass::Source));
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn sin2_partials_match_the_displayed_formulas() {
    let g = Sin2Field;
    for &(x, y) in &[(0.1, 0.2), (0.37, 0.5), (-0.45, 0.77), (0.8, 0.93), (0.25, 0.61)] {
        let big_phi = simpson(phi_direct, 0.0, y, 4000);
        let d1 = PI * (2.0 * PI * x).sin() * big_phi;
        let d2 = y * (PI / y).sin().powi(2) + phi_direct(y) * (PI * x).sin().powi(2);
        let grad = g.gradient(Vec2::new(x, y)).unwrap();
        assert!((grad.x - d1).abs() < 1e-8, "∂₁ at ({x}, {y})");
        assert!((grad.y - d2).abs() < 1e-8, "∂₂ at ({x}, {y})");
    }
}

#[test]
fn sin2_gradient_points_up_below_the_top() {
    let g = Sin2Field;
    for i in 0..50 {
        for j in 1..50 {
            let p = Vec2::new(i as f64 / 50.0, 0.9 + 0.1 * j as f64 / 50.0);
            assert!(g.gradient(p).unwrap().y > 0.0, "{p}");
        }
    }
}
