use proptest::prelude::*;
use std::f64::consts::TAU;
use torsionlab::geom::{build_winding_path, circle_rotation_number, cover_lift, cover_project, loop_winding, winding_number};
use torsionlab::Vec2;

/// A loop winding `k` times with a wobbling radius, sampled finely enough
/// that no refinement is needed.
fn wobbly_loop(k: i64, wobble: f64, phase: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|j| {
            let s = j as f64 / n as f64;
            Vec2::polar(TAU * (k as f64 * s + phase)).scale(1.0 + wobble * (TAU * 3.0 * s).sin())
        })
        .collect()
}

proptest! {
    #[test]
    fn winding_survives_rotation_and_scaling(k in -4i64..=4, wobble in 0.0..0.9f64, phase in 0.0..1.0f64, shift in 0usize..200, scale in 0.01..100.0f64) {
        let v = wobbly_loop(k, wobble, phase, 200);
        let base = winding_number(&build_winding_path(&v, true, None).unwrap()).unwrap();
        prop_assert_eq!(base, k);
        let mut rotated = v.clone();
        rotated.rotate_left(shift);
        prop_assert_eq!(winding_number(&build_winding_path(&rotated, true, None).unwrap()).unwrap(), k);
        let scaled: Vec<Vec2> = v.iter().map(|p| p.scale(scale)).collect();
        prop_assert_eq!(winding_number(&build_winding_path(&scaled, true, None).unwrap()).unwrap(), k);
    }

    #[test]
    fn reversal_negates(k in -4i64..=4, wobble in 0.0..0.9f64, phase in 0.0..1.0f64) {
        let mut v = wobbly_loop(k, wobble, phase, 200);
        v.reverse();
        prop_assert_eq!(winding_number(&build_winding_path(&v, true, None).unwrap()).unwrap(), -k);
    }

    #[test]
    fn integer_shift_of_a_lift(a in -0.15..0.15f64, alpha in 0.0..1.0f64, k in -5i64..=5) {
        let f = |x: f64| x + alpha + a * (TAU * x).sin();
        let base = circle_rotation_number(f, 500, 0.0).unwrap();
        let shifted = circle_rotation_number(|x| f(x) + k as f64, 500, 0.0).unwrap();
        // Exact up to the rounding of 500 additions of k.
        prop_assert!((shifted - base - k as f64).abs() < 1e-12);
    }

    #[test]
    fn cover_lift_tracks_winding(k in -3i64..=3, wobble in 0.0..0.8f64, phase in 0.0..1.0f64) {
        let v = wobbly_loop(k, wobble, phase, 400);
        let mut theta = cover_lift(v[0], 0.0).unwrap().theta;
        let start = theta;
        for p in v.iter().skip(1).chain(std::iter::once(&v[0])) {
            let lifted = cover_lift(*p, theta).unwrap();
            prop_assert!((cover_project(lifted) - *p).norm() < 1e-12);
            theta = lifted.theta;
        }
        prop_assert!((theta - start - k as f64).abs() < 1e-9);
    }
}

#[test]
fn refinement_resolves_fast_loops() {
    // Five turns sampled at only eight points.
    let turns = loop_winding(|s| Ok(Vec2::polar(TAU * 5.0 * s)), 8).unwrap();
    assert_eq!(turns, 5);
}
