//! Rotation numbers at fixed points: analytic blow-up values for matrices,
//! lifts selected by derivative isotopies, orbit-based local rotation set
//! estimates, the torsion-low trichotomy, and the annulus twist condition.

use crate::error::{Error, Result};
use crate::geom::build_winding_path;
use crate::indices::PlanarIsotopy;
use crate::linalg::{Eigen2, Mat2, Vec2};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Tolerance on `det(Df₁ − I)` for calling a fixed point degenerate.
pub const DEGENERATE_TOL: f64 = 1e-8;

/// Points of the time grid used to follow a matrix path.
pub const DPATH_SAMPLES: usize = 256;

/// Initial directions whose tracked rotation brackets the rotation number.
const DIRECTION_SAMPLES: usize = 64;

/// Mod-1 rotation number of `v ↦ Av/|Av|` on the unit circle, in `[0, 1)`.
pub fn linear_blowup_rotation(a: &Mat2) -> Result<f64> {
    let det = a.det();
    if !(det > 0.0) {
        return Err(Error::NotOrientationPreserving(det));
    }
    Ok(match a.eigenvalues() {
        Eigen2::Real(lo, _) if lo > 0.0 => 0.0,
        Eigen2::Real(..) => 0.5,
        Eigen2::Complex { re, im } => {
            let theta = im.abs().atan2(re) / TAU;
            // Sign of e₁ × Ae₁ tells which way the whole circle turns.
            if a.c > 0.0 {
                theta
            } else {
                1.0 - theta
            }
        }
    })
}

/// Real rotation number of the projectivized `D(1)` with the lift selected
/// by continuity from `D(0) = I`.
///
/// For each of 64 initial directions the angle of `D(t)v` is tracked over
/// `t ∈ [0, 1]`; the rotation number of the resulting lift lies between the
/// smallest and largest tracked turn, which picks the integer representative
/// of [`linear_blowup_rotation`]`(D(1))`.
pub fn isotopy_blowup_rotation<F>(dpath: F) -> Result<f64>
where
    F: Fn(f64) -> Result<Mat2>,
{
    let n = DPATH_SAMPLES;
    let mats = (0..=n).map(|k| dpath(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
    if let Some(m) = mats.iter().find(|m| !(m.det() > 0.0)) {
        return Err(Error::NotOrientationPreserving(m.det()));
    }
    let start = mats[0].sub(&Mat2::IDENTITY).max_abs();
    if start > 1e-9 {
        return Err(Error::InvalidArgument(format!("matrix path must start at the identity (off by {start})")));
    }
    let mod_one = linear_blowup_rotation(&mats[n])?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..DIRECTION_SAMPLES {
        let v = Vec2::polar(TAU * j as f64 / DIRECTION_SAMPLES as f64);
        let vectors: Vec<Vec2> = mats.iter().map(|m| m.apply(v)).collect();
        let refine = |k: usize, s: f64| Ok(dpath((k as f64 + s) / n as f64)?.apply(v));
        let turns = build_winding_path(&vectors, false, Some(&refine))?.total_angle() / TAU;
        lo = lo.min(turns);
        hi = hi.max(turns);
    }
    // Integer k putting mod_one + k closest to [lo, hi].
    let mid = 0.5 * (lo + hi);
    let base = (mid - mod_one).floor();
    let distance = |x: f64| {
        if x < lo {
            lo - x
        } else if x > hi {
            x - hi
        } else {
            0.0
        }
    };
    let best = [base - 1.0, base, base + 1.0, base + 2.0]
        .into_iter()
        .map(|k| mod_one + k)
        .min_by(|a, b| distance(*a).total_cmp(&distance(*b)))
        .expect("nonempty");
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorsionClass {
    TorsionLow,
    NotTorsionLow,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    ComplexEigen,
    NegativeRealPair,
    /// Real eigenvalues `0 < λ₁ < 1 < λ₂`.
    PositiveSaddle,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionVerdict {
    pub classification: TorsionClass,
    pub rho: f64,
    pub degenerate: bool,
    pub case_tag: CaseTag,
}

pub fn case_tag(a: &Mat2) -> CaseTag {
    match a.eigenvalues() {
        Eigen2::Complex { .. } => CaseTag::ComplexEigen,
        Eigen2::Real(lo, hi) if lo < 0.0 && hi < 0.0 => CaseTag::NegativeRealPair,
        Eigen2::Real(lo, hi) if 0.0 < lo && lo < 1.0 && hi > 1.0 => CaseTag::PositiveSaddle,
        Eigen2::Real(..) => CaseTag::Other,
    }
}

/// Torsion-low test at a fixed point from the derivative path `t ↦ Df_t(z₀)`.
pub fn torsion_low_classify<F>(dpath: F) -> Result<TorsionVerdict>
where
    F: Fn(f64) -> Result<Mat2>,
{
    let d1 = dpath(1.0)?;
    if !(d1.det() > 0.0) {
        return Err(Error::NotOrientationPreserving(d1.det()));
    }
    let rho = isotopy_blowup_rotation(&dpath)?;
    let degenerate = d1.sub(&Mat2::IDENTITY).det().abs() <= DEGENERATE_TOL;
    let classification = if degenerate && (rho.abs() - 1.0).abs() <= DEGENERATE_TOL {
        TorsionClass::Inconclusive
    } else if (degenerate && rho.abs() <= 1.0) || (!degenerate && rho.abs() < 1.0) {
        TorsionClass::TorsionLow
    } else {
        TorsionClass::NotTorsionLow
    };
    Ok(TorsionVerdict { classification, rho, degenerate, case_tag: case_tag(&d1) })
}

/// One orbit admitted to `E(U, V, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationSample {
    pub start: Vec2,
    /// Average angular displacement per iterate, in turns.
    pub rho: f64,
}

/// Deterministic seeds spread uniformly by area over `V < |z − c| < U`.
pub fn annulus_seeds(center: Vec2, u_radius: f64, v_radius: f64, seeds: usize) -> Vec<Vec2> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..seeds)
        .map(|k| {
            let frac = (k as f64 + 0.5) / seeds as f64;
            let r = (v_radius * v_radius + (u_radius * u_radius - v_radius * v_radius) * frac).sqrt();
            center + Vec2::polar(golden * k as f64).scale(r)
        })
        .collect()
}

fn orbit_rotation(iso: &PlanarIsotopy, center: Vec2, u: f64, v: f64, n: usize, z: Vec2) -> Option<f64> {
    let dist = |w: Vec2| (w - center).norm();
    if !(dist(z) > v && dist(z) < u) {
        return None;
    }
    let mut w = z;
    let mut turns = 0.0;
    for i in 1..=n {
        turns += iso.angular_displacement(center, w).ok()?;
        w = iso.time_one(w).ok()?;
        if !(dist(w) < u) || (i == n && !(dist(w) > v)) {
            return None;
        }
    }
    Some(turns / n as f64)
}

/// `ρ_n` for every seeded orbit in `E(U, V, n)`, in seed order.
///
/// Seeds are processed in parallel; the result does not depend on the
/// number of worker threads.
pub fn rotation_samples(
    iso: &PlanarIsotopy,
    center: Vec2,
    u_radius: f64,
    v_radius: f64,
    n: usize,
    seeds: usize,
) -> Result<Vec<RotationSample>> {
    if !(0.0 < v_radius && v_radius < u_radius) || n == 0 {
        return Err(Error::InvalidArgument("need 0 < V < U and n ≥ 1".into()));
    }
    let points = annulus_seeds(center, u_radius, v_radius, seeds);
    let kept: Vec<Option<RotationSample>> = points
        .par_iter()
        .map(|&z| orbit_rotation(iso, center, u_radius, v_radius, n, z).map(|rho| RotationSample { start: z, rho }))
        .collect();
    Ok(kept.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateParams {
    pub r0: f64,
    pub levels: usize,
    pub n_max: usize,
    pub divergence_threshold: f64,
    pub seeds: usize,
}

impl EstimateParams {
    pub fn new(r0: f64, levels: usize, n_max: usize, divergence_threshold: f64) -> Self {
        EstimateParams { r0, levels, n_max, divergence_threshold, seeds: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateSample {
    pub level: usize,
    pub n: usize,
    pub rho: f64,
    pub start: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RotationSetEstimate {
    pub lo: f64,
    pub hi: f64,
    /// Some sample fell below `−divergence_threshold`.
    pub lo_diverges: bool,
    /// Some sample rose above `divergence_threshold`.
    pub hi_diverges: bool,
    pub samples: Vec<EstimateSample>,
    /// `(U, V)` radii of the level the interval was read from.
    pub annulus: (f64, f64),
    pub level_used: usize,
    pub n_min_used: usize,
    /// True when no sample at the deepest nonempty level reached `n_max/4`
    /// iterates and shorter orbits were used instead.
    pub short_orbits_only: bool,
}

/// `1, 2, 4, …` capped by and ending at `n_max`.
pub fn iterate_schedule(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 1;
    while n < n_max {
        out.push(n);
        n *= 2;
    }
    out.push(n_max);
    out
}

/// Interval estimate of the local rotation set at `center` from orbits in
/// the windows `U = r0/2^k`, `V = r0/2^{k+2}`.
pub fn local_rotation_set_estimate(iso: &PlanarIsotopy, center: Vec2, p: &EstimateParams) -> Result<RotationSetEstimate> {
    if p.levels == 0 || p.n_max < 4 || !(p.r0 > 0.0) {
        return Err(Error::InvalidArgument("need levels ≥ 1, n_max ≥ 4 and r0 > 0".into()));
    }
    let schedule = iterate_schedule(p.n_max);
    let mut samples = Vec::new();
    for level in 0..p.levels {
        let u = p.r0 / 2f64.powi(level as i32);
        let v = u / 4.0;
        for &n in &schedule {
            for s in rotation_samples(iso, center, u, v, n, p.seeds)? {
                samples.push(EstimateSample { level, n, rho: s.rho, start: s.start });
            }
        }
    }
    let Some(deepest) = samples.iter().map(|s| s.level).max() else {
        return Err(Error::NoSamples(format!("levels {} from r0 = {}, n up to {}, {} seeds", p.levels, p.r0, p.n_max, p.seeds)));
    };
    let at_level: Vec<&EstimateSample> = samples.iter().filter(|s| s.level == deepest).collect();
    let long: Vec<&EstimateSample> = at_level.iter().copied().filter(|s| 4 * s.n >= p.n_max).collect();
    let short_orbits_only = long.is_empty();
    let used = if short_orbits_only { at_level } else { long };
    let lo = used.iter().map(|s| s.rho).fold(f64::INFINITY, f64::min);
    let hi = used.iter().map(|s| s.rho).fold(f64::NEG_INFINITY, f64::max);
    let n_min_used = used.iter().map(|s| s.n).min().unwrap_or(0);
    let u = p.r0 / 2f64.powi(deepest as i32);
    Ok(RotationSetEstimate {
        lo,
        hi,
        lo_diverges: lo < -p.divergence_threshold,
        hi_diverges: hi > p.divergence_threshold,
        samples,
        annulus: (u, u / 4.0),
        level_used: deepest,
        n_min_used,
        short_orbits_only,
    })
}

const LIFT_PROBES: usize = 16;
const LIFT_TOL: f64 = 1e-9;

pub type LiftFn = Arc<dyn Fn(Vec2) -> Result<Vec2> + Send + Sync>;

/// A lift `f̃ : ℝ × [−a, a] → ℝ × [−b, b]` of an annulus map, commuting with
/// the deck translation `(x, y) ↦ (x + 1, y)`.
#[derive(Clone)]
pub struct AnnulusLiftMap {
    lift: LiftFn,
    a: f64,
    b: f64,
}

impl std::fmt::Debug for AnnulusLiftMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnnulusLiftMap").field("a", &self.a).field("b", &self.b).finish()
    }
}

impl AnnulusLiftMap {
    /// Checks `f̃(x + 1, y) = f̃(x, y) + (1, 0)` at 16 probes.
    pub fn new<F>(a: f64, b: f64, lift: F) -> Result<Self>
    where
        F: Fn(Vec2) -> Result<Vec2> + Send + Sync + 'static,
    {
        if !(a > 0.0 && b >= a) {
            return Err(Error::InvalidArgument("need 0 < a ≤ b".into()));
        }
        for k in 0..LIFT_PROBES {
            let s = (k as f64 + 0.5) / LIFT_PROBES as f64;
            let z = Vec2::new(s, a * (2.0 * s - 1.0));
            let defect = lift(z + Vec2::new(1.0, 0.0))? - lift(z)? - Vec2::new(1.0, 0.0);
            if !(defect.norm() <= LIFT_TOL) {
                return Err(Error::NotALift { x: z.x, defect: defect.norm() });
            }
        }
        Ok(AnnulusLiftMap { lift: Arc::new(lift), a, b })
    }

    pub fn apply(&self, z: Vec2) -> Result<Vec2> {
        (self.lift)(z)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEvidence {
    /// Range of `p₁f̃(x, a) − x` over the sampled top circle.
    pub top: (f64, f64),
    /// Range of `p₁f̃(x′, −a) − x′` over the sampled bottom circle.
    pub bottom: (f64, f64),
    /// Largest product over all sampled pairs; the twist holds iff it is `< 0`.
    pub max_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistReport {
    pub twist_holds: bool,
    pub boundary: BoundaryEvidence,
    /// Fixed points of `f̃` with `x ∈ [0, 1)`.
    pub fixed_points: Vec<Vec2>,
    pub residuals: Vec<f64>,
}

pub const FIXED_RESIDUAL: f64 = 1e-9;

/// Gauss–Newton with Levenberg damping on `f̃(z) − z`.
fn refine_fixed(m: &AnnulusLiftMap, start: Vec2) -> Option<(Vec2, f64)> {
    let res = |z: Vec2| m.apply(z).map(|w| w - z);
    let mut z = start;
    let mut r = res(z).ok()?;
    let mut lambda = 1e-12;
    for _ in 0..100 {
        if r.norm() <= FIXED_RESIDUAL * 1e-3 {
            break;
        }
        let h = 1e-7;
        let dx = (res(z + Vec2::new(h, 0.0)).ok()? - res(z - Vec2::new(h, 0.0)).ok()?).scale(0.5 / h);
        let dy = (res(z + Vec2::new(0.0, h)).ok()? - res(z - Vec2::new(0.0, h)).ok()?).scale(0.5 / h);
        let j = Mat2::new(dx.x, dy.x, dx.y, dy.y);
        // (JᵀJ + λI) δ = −Jᵀr
        let jt = Mat2::new(j.a, j.c, j.b, j.d);
        let jtj = jt.mul(&j);
        let g = jt.apply(r);
        let mut accepted = false;
        for _ in 0..30 {
            let lhs = Mat2::new(jtj.a + lambda, jtj.b, jtj.c, jtj.d + lambda);
            let Some(inv) = lhs.inverse() else {
                lambda *= 10.0;
                continue;
            };
            let candidate = z - inv.apply(g);
            if let Ok(rc) = res(candidate) {
                if rc.norm() < r.norm() {
                    z = candidate;
                    r = rc;
                    lambda = (lambda * 0.1).max(1e-15);
                    accepted = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    (r.norm() <= FIXED_RESIDUAL && z.y.abs() <= m.a).then_some((z, r.norm()))
}

/// Checks the boundary twist and hunts fixed points of the lift on the
/// fundamental domain `[0, 1) × [−a, a]`.
pub fn twist_check_and_search(m: &AnnulusLiftMap, grid: usize) -> Result<TwistReport> {
    if grid < 16 {
        return Err(Error::InvalidArgument("grid must be at least 16".into()));
    }
    let a = m.a;
    let xs: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    let top = xs.iter().map(|&x| Ok(m.apply(Vec2::new(x, a))?.x - x)).collect::<Result<Vec<f64>>>()?;
    let bottom = xs.iter().map(|&x| Ok(m.apply(Vec2::new(x, -a))?.x - x)).collect::<Result<Vec<f64>>>()?;
    let range =
        |v: &[f64]| (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let (t_lo, t_hi) = range(&top);
    let (b_lo, b_hi) = range(&bottom);
    let max_product = [t_lo * b_lo, t_lo * b_hi, t_hi * b_lo, t_hi * b_hi].into_iter().fold(f64::NEG_INFINITY, f64::max);

    let ys: Vec<f64> = (0..=grid).map(|j| -a + 2.0 * a * j as f64 / grid as f64).collect();
    let mut disp = vec![vec![Vec2::ZERO; grid + 1]; grid + 1];
    for (i, row) in disp.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let z = Vec2::new(i as f64 / grid as f64, ys[j]);
            *cell = m.apply(z)? - z;
        }
    }
    let mut found: Vec<(Vec2, f64)> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let corners = [disp[i][j], disp[i + 1][j], disp[i][j + 1], disp[i + 1][j + 1]];
            let spans = |c: fn(&Vec2) -> f64| {
                let lo = corners.iter().map(c).fold(f64::INFINITY, f64::min);
                let hi = corners.iter().map(c).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if !(spans(|v| v.x) && spans(|v| v.y)) {
                continue;
            }
            let seed = Vec2::new((i as f64 + 0.5) / grid as f64, 0.5 * (ys[j] + ys[j + 1]));
            if let Some((z, r)) = refine_fixed(m, seed) {
                let z = Vec2::new(z.x.rem_euclid(1.0), z.y);
                let dup = found.iter().any(|(p, _)| {
                    let dx = (p.x - z.x).abs();
                    dx.min(1.0 - dx).hypot(p.y - z.y) < 1e-6
                });
                if !dup {
                    found.push((z, r));
                }
            }
        }
    }
    found.sort_by(|p, q| p.0.x.total_cmp(&q.0.x).then(p.0.y.total_cmp(&q.0.y)));
    Ok(TwistReport {
        twist_holds: max_product < 0.0,
        boundary: BoundaryEvidence { top: (t_lo, t_hi), bottom: (b_lo, b_hi), max_product },
        fixed_points: found.iter().map(|f| f.0).collect(),
        residuals: found.iter().map(|f| f.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::circle_rotation_number;
    use crate::indices::Provenance;

    #[test]
    fn linear_cases() {
        assert!((linear_blowup_rotation(&Mat2::rotation(TAU * 0.3)).unwrap() - 0.3).abs() < 1e-12);
        assert!((linear_blowup_rotation(&Mat2::rotation(-TAU * 0.3)).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(linear_blowup_rotation(&Mat2::diag(2.0, 0.5)).unwrap(), 0.0);
        assert_eq!(linear_blowup_rotation(&Mat2::diag(-3.0, -1.0 / 3.0)).unwrap(), 0.5);
        assert!(matches!(linear_blowup_rotation(&Mat2::diag(1.0, -1.0)), Err(Error::NotOrientationPreserving(_))));
    }

    #[test]
    fn analytic_value_matches_circle_iteration() {
        let a = Mat2::new(1.0, 1.0, -1.0, 0.0);
        let lift = |x: f64| {
            let v = a.apply(Vec2::polar(TAU * x));
            // Continuous lift: nearest angle to x + 5/6 (the known clockwise sixth turn).
            let base = v.angle() / TAU;
            base + (x - 1.0 / 6.0 - base).round()
        };
        let iterated = circle_rotation_number(lift, 20_000, 0.0).unwrap().rem_euclid(1.0);
        let analytic = linear_blowup_rotation(&a).unwrap();
        assert!((analytic - 5.0 / 6.0).abs() < 1e-12);
        assert!((iterated - analytic).abs() < 5e-3);
    }

    #[test]
    fn tracked_lifts() {
        let rot = |turns: f64| move |t: f64| Ok(Mat2::rotation(TAU * turns * t));
        assert!((isotopy_blowup_rotation(rot(0.3)).unwrap() - 0.3).abs() < 1e-12);
        assert!((isotopy_blowup_rotation(rot(1.3)).unwrap() - 1.3).abs() < 1e-12);
        assert!((isotopy_blowup_rotation(rot(-0.6)).unwrap() + 0.6).abs() < 1e-12);
        let stretch = |t: f64| Ok(Mat2::diag(1.0 + t, 1.0 / (1.0 + t)));
        assert_eq!(isotopy_blowup_rotation(stretch).unwrap(), 0.0);
    }

    #[test]
    fn torsion_examples() {
        let v = torsion_low_classify(|t| Ok(Mat2::rotation(TAU * 0.25 * t))).unwrap();
        assert_eq!(v.classification, TorsionClass::TorsionLow);
        assert_eq!(v.case_tag, CaseTag::ComplexEigen);
        assert!((v.rho - 0.25).abs() < 1e-12 && !v.degenerate);
        let v = torsion_low_classify(|t| Ok(Mat2::rotation(TAU * 1.25 * t))).unwrap();
        assert_eq!(v.classification, TorsionClass::NotTorsionLow);
        assert!((v.rho - 1.25).abs() < 1e-12);
        let v = torsion_low_classify(|t| Ok(Mat2::rotation(TAU * t))).unwrap();
        assert_eq!(v.classification, TorsionClass::Inconclusive);
        assert!(v.degenerate);
        let v = torsion_low_classify(|_| Ok(Mat2::IDENTITY)).unwrap();
        assert_eq!((v.classification, v.rho), (TorsionClass::TorsionLow, 0.0));
    }

    fn rigid(alpha: f64) -> PlanarIsotopy {
        PlanarIsotopy::new(Provenance::UserExpression("rotation".into()), Some(Vec2::ZERO), move |t, z| {
            Ok(z.rotate(TAU * alpha * t))
        })
        .unwrap()
    }

    #[test]
    fn rigid_rotation_samples() {
        let s = rotation_samples(&rigid(0.2), Vec2::ZERO, 0.1, 0.025, 7, 32).unwrap();
        assert_eq!(s.len(), 32);
        assert!(s.iter().all(|x| (x.rho - 0.2).abs() < 1e-9));
        let id = rigid(0.0);
        let s = rotation_samples(&id, Vec2::ZERO, 0.1, 0.025, 3, 8).unwrap();
        assert!(s.len() == 8 && s.iter().all(|x| x.rho == 0.0));
    }

    #[test]
    fn estimate_of_rigid_rotation() {
        let e = local_rotation_set_estimate(&rigid(0.2), Vec2::ZERO, &EstimateParams::new(0.1, 2, 8, 10.0)).unwrap();
        assert!((e.lo - 0.2).abs() < 1e-9 && (e.hi - 0.2).abs() < 1e-9);
        assert!(!e.lo_diverges && !e.hi_diverges && !e.short_orbits_only);
        assert_eq!(e.level_used, 1);
        assert_eq!(iterate_schedule(8), vec![1, 2, 4, 8]);
        assert_eq!(iterate_schedule(6), vec![1, 2, 4, 6]);
    }

    #[test]
    fn escaping_orbits_give_no_samples() {
        let push =
            PlanarIsotopy::new(Provenance::UserExpression("push".into()), None, |t, z| Ok(z.scale(1.0 + 9.0 * t))).unwrap();
        let e = local_rotation_set_estimate(&push, Vec2::ZERO, &EstimateParams::new(0.1, 2, 4, 10.0));
        assert!(matches!(e, Err(Error::NoSamples(_))));
    }

    #[test]
    fn shear_twist_and_rigid_failure() {
        let shear = AnnulusLiftMap::new(1.0, 1.0, |z| Ok(Vec2::new(z.x + z.y, z.y))).unwrap();
        let r = twist_check_and_search(&shear, 32).unwrap();
        assert!(r.twist_holds);
        assert!(!r.fixed_points.is_empty());
        assert!(r.fixed_points.iter().all(|p| p.y.abs() <= 1e-9));
        assert!(r.residuals.iter().all(|&x| x <= 1e-9));
        let rigid = AnnulusLiftMap::new(1.0, 1.0, |z| Ok(Vec2::new(z.x + 0.3, z.y))).unwrap();
        let r = twist_check_and_search(&rigid, 16).unwrap();
        assert!(!r.twist_holds && r.fixed_points.is_empty());
        assert!(AnnulusLiftMap::new(1.0, 1.0, |z| Ok(Vec2::new(2.0 * z.x, z.y))).is_err());
    }
}
