//! Angle lifting, winding numbers, circle-map rotation numbers and the
//! annular universal cover `(θ, y) ↦ −y·e^{i2πθ}` of the punctured plane.
//!
//! Angles in [`WindingPath`] are radians; `theta` in [`CoverPoint`] is in
//! turns (period 1). Conversions go through [`TAU`] explicitly.

use crate::error::{Error, Result};
use crate::linalg::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Bisection depth after which angle refinement gives up.
pub const MAX_REFINE_DEPTH: u32 = 40;

/// Tolerance on `(lift_end − lift_start)/2π` being an integer.
pub const WINDING_RESIDUE_TOL: f64 = 0.1;

/// Produces the vector at fractional parameter `s ∈ (0, 1)` between sample
/// `k` and its successor (the successor of the last sample of a closed path
/// is sample 0).
pub type Refiner<'a> = &'a dyn Fn(usize, f64) -> Result<Vec2>;

/// Signed angle from `a` to `b` in `(−π, π]`.
pub fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// A sampled path of nonzero vectors together with a continuous angle lift.
#[derive(Debug, Clone, PartialEq)]
pub struct WindingPath {
    samples: Vec<Vec2>,
    closed: bool,
    lift: Vec<f64>,
}

impl WindingPath {
    /// All samples, including refinement insertions. A closed path ends with
    /// a repeat of its first sample.
    pub fn samples(&self) -> &[Vec2] {
        &self.samples
    }

    pub fn lift(&self) -> &[f64] {
        &self.lift
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Total change of the lifted angle, in radians.
    pub fn total_angle(&self) -> f64 {
        self.lift.last().copied().unwrap_or(0.0) - self.lift.first().copied().unwrap_or(0.0)
    }
}

struct LiftBuilder<'a> {
    samples: Vec<Vec2>,
    lift: Vec<f64>,
    refiner: Option<Refiner<'a>>,
}

impl LiftBuilder<'_> {
    fn push(&mut self, v: Vec2) {
        let prev = *self.samples.last().expect("seeded with the first sample");
        let angle = self.lift.last().copied().unwrap_or(0.0) + angle_between(prev, v);
        self.samples.push(v);
        self.lift.push(angle);
    }

    /// Appends samples strictly after `va` up to and including `vb`.
    fn segment(&mut self, k: usize, k_next: usize, va: Vec2, vb: Vec2) -> Result<()> {
        // Explicit stack of (s_lo, v_lo, s_hi, v_hi, depth), processed left to right.
        let mut stack = vec![(0.0, va, 1.0, vb, 0u32)];
        while let Some((s0, v0, s1, v1, depth)) = stack.pop() {
            if angle_between(v0, v1).abs() < FRAC_PI_2 {
                self.push(v1);
                continue;
            }
            let Some(refine) = self.refiner else {
                return Err(Error::RefinementExhausted(k, k_next));
            };
            if depth >= MAX_REFINE_DEPTH {
                return Err(Error::RefinementExhausted(k, k_next));
            }
            let sm = 0.5 * (s0 + s1);
            let vm = refine(k, sm)?;
            if !(vm.norm() > 0.0) || !vm.is_finite() {
                return Err(Error::ZeroVector(k));
            }
            stack.push((sm, vm, s1, v1, depth + 1));
            stack.push((s0, v0, sm, vm, depth + 1));
        }
        Ok(())
    }
}

/// Builds the continuous angle lift of a sequence of nonzero vectors.
///
/// Consecutive samples turning by π/2 or more are bisected through
/// `refiner` (up to depth [`MAX_REFINE_DEPTH`]); without a refiner such a
/// step is an error.
pub fn build_winding_path(vectors: &[Vec2], closed: bool, refiner: Option<Refiner<'_>>) -> Result<WindingPath> {
    if let Some(i) = vectors.iter().position(|v| !(v.norm() > 0.0) || !v.is_finite()) {
        return Err(Error::ZeroVector(i));
    }
    let Some(&first) = vectors.first() else {
        return Err(Error::InvalidArgument("winding path needs at least one sample".into()));
    };
    let mut b =
        LiftBuilder { samples: Vec::with_capacity(vectors.len() + 1), lift: Vec::with_capacity(vectors.len() + 1), refiner };
    b.samples.push(first);
    b.lift.push(first.angle());
    for k in 0..vectors.len() - 1 {
        b.segment(k, k + 1, vectors[k], vectors[k + 1])?;
    }
    if closed {
        let last = vectors.len() - 1;
        b.segment(last, 0, vectors[last], first)?;
    }
    Ok(WindingPath { samples: b.samples, closed, lift: b.lift })
}

/// Degree of a closed path of nonzero vectors.
pub fn winding_number(p: &WindingPath) -> Result<i64> {
    if !p.closed {
        return Err(Error::NotClosed);
    }
    let turns = p.total_angle() / TAU;
    let n = turns.round();
    let residue = (turns - n).abs();
    if residue > WINDING_RESIDUE_TOL {
        return Err(Error::NonIntegralWinding(residue));
    }
    Ok(n as i64)
}

/// Winding number of the closed loop `s ↦ f(s)`, `s ∈ [0, 1)`, sampled at
/// `n` uniform parameters and refined through `f` itself.
pub fn loop_winding<F>(f: F, n: usize) -> Result<i64>
where
    F: Fn(f64) -> Result<Vec2>,
{
    let n = n.max(1);
    let vectors = (0..n).map(|k| f(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    let refine = |k: usize, s: f64| f((k as f64 + s) / n as f64);
    winding_number(&build_winding_path(&vectors, true, Some(&refine))?)
}

/// Continuous change of angle (radians) of the open path `t ↦ f(t)`,
/// `t ∈ [0, 1]`, sampled at `n + 1` uniform parameters and refined through `f`.
pub fn track_angle<F>(f: F, n: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<Vec2>,
{
    let n = n.max(1);
    let vectors = (0..=n).map(|k| f(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    let refine = |k: usize, s: f64| f((k as f64 + s) / n as f64);
    Ok(build_winding_path(&vectors, false, Some(&refine))?.total_angle())
}

/// Number of probe points used to check the lift identity `F(x+1) = F(x)+1`.
const LIFT_PROBES: usize = 16;
const LIFT_TOL: f64 = 1e-9;

/// Birkhoff average `(Fⁿ(x₀) − x₀)/n` of a lift of a circle map.
///
/// Converges like O(1/n) to the rotation number; no acceleration is applied.
pub fn circle_rotation_number<F>(lift: F, n_iter: usize, x0: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if n_iter == 0 {
        return Err(Error::InvalidArgument("n_iter must be at least 1".into()));
    }
    for k in 0..LIFT_PROBES {
        let x = x0 + k as f64 / LIFT_PROBES as f64;
        let defect = lift(x + 1.0) - lift(x) - 1.0;
        if !(defect.abs() <= LIFT_TOL) {
            return Err(Error::NotALift { x, defect });
        }
    }
    let mut x = x0;
    for _ in 0..n_iter {
        x = lift(x);
    }
    Ok((x - x0) / n_iter as f64)
}

/// A point of the annular cover `ℝ × (−∞, 0)`; `theta` is measured in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverPoint {
    pub theta: f64,
    pub y: f64,
}

impl CoverPoint {
    pub fn new(theta: f64, y: f64) -> Result<Self> {
        if !(y < 0.0) {
            return Err(Error::InvalidArgument(format!("cover radial coordinate must be < 0, got {y}")));
        }
        Ok(CoverPoint { theta, y })
    }
}

/// `(θ, y) ↦ −y·e^{i2πθ}`.
pub fn cover_project(p: CoverPoint) -> Vec2 {
    Vec2::polar(TAU * p.theta).scale(-p.y)
}

/// Inverse of [`cover_project`], picking the deck translate whose `theta`
/// is nearest to `theta_hint`.
pub fn cover_lift(z: Vec2, theta_hint: f64) -> Result<CoverPoint> {
    let r = z.norm();
    if !(r > 0.0) {
        return Err(Error::OriginNotInCover);
    }
    let base = z.angle() / TAU;
    let shift = (theta_hint - base).round();
    Ok(CoverPoint { theta: base + shift, y: -r })
}

/// Wraps an angle in radians to `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle(n: usize) -> Vec<Vec2> {
        (0..n).map(|k| Vec2::polar(TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn constant_path_has_flat_lift() {
        let p = build_winding_path(&vec![Vec2::new(1.0, 0.0); 100], true, None).unwrap();
        assert!(p.lift().iter().all(|&a| a == 0.0));
        assert_eq!(winding_number(&p).unwrap(), 0);
    }

    #[test]
    fn unit_circle_turns_once() {
        let p = build_winding_path(&unit_circle(64), true, None).unwrap();
        assert!((p.total_angle() - TAU).abs() < 1e-12);
        assert_eq!(winding_number(&p).unwrap(), 1);
        for w in p.lift().windows(2) {
            assert!((w[1] - w[0]).abs() < FRAC_PI_2);
        }
    }

    #[test]
    fn wild_samples_without_refiner_fail() {
        let v = vec![Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.1), Vec2::new(1.0, 0.0)];
        assert_eq!(build_winding_path(&v, true, None), Err(Error::RefinementExhausted(0, 1)));
        let z = vec![Vec2::new(1.0, 0.0), Vec2::ZERO];
        assert_eq!(build_winding_path(&z, false, None), Err(Error::ZeroVector(1)));
    }

    #[test]
    fn refiner_that_never_settles_exhausts() {
        // Every midpoint sits at the right endpoint, so the left half never shrinks.
        let refine = |_k: usize, _s: f64| Ok(Vec2::new(-1.0, 0.0));
        let v = vec![Vec2::new(1.0, 0.0), Vec2::new(-1.0, 0.0)];
        assert!(matches!(build_winding_path(&v, false, Some(&refine)), Err(Error::RefinementExhausted(0, 1))));
    }

    #[test]
    fn coarse_samples_are_refined() {
        // Four samples of a double loop: each step turns by π, needs bisection.
        let f = |s: f64| Ok(Vec2::polar(2.0 * TAU * s));
        assert_eq!(loop_winding(f, 4).unwrap(), 2);
        assert_eq!(loop_winding(|s| Ok(Vec2::polar(-3.0 * TAU * s)), 8).unwrap(), -3);
    }

    #[test]
    fn open_path_rejected() {
        let p = build_winding_path(&unit_circle(8), false, None).unwrap();
        assert_eq!(winding_number(&p), Err(Error::NotClosed));
    }

    #[test]
    fn displacement_of_doubling_map() {
        // f = 2·id on the unit circle: f(γ) − γ = γ, degree sign det(2I − I) = 1.
        let vecs: Vec<Vec2> = unit_circle(256).into_iter().map(|g| g.scale(2.0) - g).collect();
        let p = build_winding_path(&vecs, true, None).unwrap();
        assert_eq!(winding_number(&p).unwrap(), 1);
    }

    #[test]
    fn rigid_rotation_number() {
        let r = circle_rotation_number(|x| x + 0.35, 17, 0.2).unwrap();
        assert!((r - 0.35).abs() < 1e-15);
        assert_eq!(circle_rotation_number(|x| x, 10, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn arnold_map_self_consistency() {
        let f = |x: f64| x + 0.3 + 0.1 * (TAU * x).sin();
        let a = circle_rotation_number(f, 100_000, 0.0).unwrap();
        let b = circle_rotation_number(f, 200_000, 0.0).unwrap();
        assert!((a - b).abs() < 5e-3);
    }

    #[test]
    fn non_lift_is_rejected() {
        assert!(matches!(circle_rotation_number(|x| 2.0 * x, 10, 0.0), Err(Error::NotALift { .. })));
        assert!(circle_rotation_number(|x| x, 0, 0.0).is_err());
    }

    #[test]
    fn cover_examples() {
        let p = cover_project(CoverPoint::new(0.0, -1.0).unwrap());
        assert!((p - Vec2::new(1.0, 0.0)).norm() < 1e-15);
        let q = cover_project(CoverPoint::new(1.0, -1.0).unwrap());
        assert!((q - Vec2::new(1.0, 0.0)).norm() < 1e-15);
        let l = cover_lift(Vec2::new(0.0, 2.0), 0.0).unwrap();
        assert!((l.theta - 0.25).abs() < 1e-15 && l.y == -2.0);
        assert_eq!(cover_lift(Vec2::ZERO, 0.0), Err(Error::OriginNotInCover));
        assert!(CoverPoint::new(0.0, 0.0).is_err());
    }

    #[test]
    fn cover_lift_follows_hint() {
        let l = cover_lift(Vec2::new(1.0, 0.0), 3.4).unwrap();
        assert_eq!(l.theta, 3.0);
        let l = cover_lift(Vec2::new(-1.0, -1e-300), -0.1).unwrap();
        assert!((l.theta + 0.5).abs() < 1e-12);
    }
}
