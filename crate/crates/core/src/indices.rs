//! Brouwer-degree indices of maps and isotopies, linking numbers of fixed
//! points, and the preorder on local isotopies read off the annular cover.

use crate::error::{Error, Result};
use crate::foliate::{sample_path, transversality_report, Foliation, Verdict};
use crate::genfunc::{alt_jacobian, alt_point, GenIsotopy};
use crate::geom::{build_winding_path, cover_project, loop_winding, winding_number, CoverPoint};
use crate::linalg::{Mat2, Vec2};
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

/// Displacements shorter than this count as fixed points on a test curve.
pub const FIXED_ON_CURVE_TOL: f64 = 1e-10;

/// Tolerance for "the center is fixed by the whole isotopy".
pub const CENTER_FIXED_TOL: f64 = 1e-9;

/// Tolerance of the identity-at-time-zero probe check.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Pointwise tolerance of [`compare_isotopies`].
pub const ORDER_TOL: f64 = 1e-9;

/// Initial t-grid used to follow a trajectory around the center.
pub const TRACK_T_SAMPLES: usize = 256;

const TRACK_MAX_T_SAMPLES: usize = 1 << 16;
const IDENTITY_PROBES: usize = 32;
const CENTER_T_GRID: usize = 64;

pub type IsotopyFn = Arc<dyn Fn(f64, Vec2) -> Result<Vec2> + Send + Sync>;
pub type JacobianFn = Arc<dyn Fn(f64, Vec2) -> Result<Mat2> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Provenance {
    GenfuncNatural,
    GenfuncAlternate,
    /// The full turn `J` about a point.
    RigidRotation,
    /// Given in closed form by the caller (formula or fixture chart).
    UserExpression(String),
    /// `J^k ∘ I` for the wrapped isotopy.
    Composed {
        turns: i64,
        base: Box<Provenance>,
    },
}

/// An identity isotopy `(f_t)_{t∈[0,1]}` of the plane (or of an open subset).
#[derive(Clone)]
pub struct PlanarIsotopy {
    eval: IsotopyFn,
    jacobian: Option<JacobianFn>,
    fixed_point_hint: Option<Vec2>,
    provenance: Provenance,
}

impl std::fmt::Debug for PlanarIsotopy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlanarIsotopy")
            .field("provenance", &self.provenance)
            .field("fixed_point_hint", &self.fixed_point_hint)
            .finish()
    }
}

impl PlanarIsotopy {
    /// Wraps `eval` after checking `eval(0, z) = z` on 32 probe points
    /// scattered over `[−1, 1]²` (shifted to the hint if one is given).
    /// Probes where `eval` reports a domain error are skipped.
    pub fn new<F>(provenance: Provenance, fixed_point_hint: Option<Vec2>, eval: F) -> Result<Self>
    where
        F: Fn(f64, Vec2) -> Result<Vec2> + Send + Sync + 'static,
    {
        let iso = PlanarIsotopy { eval: Arc::new(eval), jacobian: None, fixed_point_hint, provenance };
        iso.check_identity_at_zero()?;
        Ok(iso)
    }

    fn check_identity_at_zero(&self) -> Result<()> {
        let base = self.fixed_point_hint.unwrap_or(Vec2::ZERO);
        let golden = 0.5 * (5f64.sqrt() - 1.0);
        for k in 0..IDENTITY_PROBES {
            let u = (k as f64 + 0.5) / IDENTITY_PROBES as f64;
            let v = (k as f64 * golden).fract();
            let z = base + Vec2::new(2.0 * u - 1.0, 2.0 * v - 1.0);
            match (self.eval)(0.0, z) {
                Ok(w) if (w - z).norm() <= IDENTITY_TOL => {}
                Ok(w) => return Err(Error::InvalidArgument(format!("isotopy is not the identity at t = 0: {z} ↦ {w}"))),
                Err(Error::Domain { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    /// Supplies a closed-form Jacobian of `f_t`.
    pub fn with_jacobian<F>(mut self, jac: F) -> Self
    where
        F: Fn(f64, Vec2) -> Result<Mat2> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    /// `f_t = g·t` solved implicitly.
    pub fn from_genfunc(iso: &GenIsotopy) -> Self {
        let a = iso.clone();
        let b = iso.clone();
        PlanarIsotopy {
            eval: Arc::new(move |t, z| a.gf_apply(t, z)),
            jacobian: Some(Arc::new(move |t, z| b.gf_jacobian(t, z))),
            fixed_point_hint: None,
            provenance: Provenance::GenfuncNatural,
        }
    }

    /// The two-phase isotopy `I′` through `(X, y)`.
    pub fn from_genfunc_alternate(iso: &GenIsotopy) -> Self {
        let a = iso.clone();
        let b = iso.clone();
        PlanarIsotopy {
            eval: Arc::new(move |t, z| Ok(alt_point(t, z, a.gf_apply(1.0, z)?))),
            jacobian: Some(Arc::new(move |t, z| Ok(alt_jacobian(t, &b.gf_jacobian(1.0, z)?)))),
            fixed_point_hint: None,
            provenance: Provenance::GenfuncAlternate,
        }
    }

    /// `J_c = (R_{2πt})`, one full counterclockwise turn about `center`.
    pub fn rigid_rotation(center: Vec2) -> Self {
        PlanarIsotopy {
            eval: Arc::new(move |t, z| Ok(center + (z - center).rotate(TAU * t))),
            jacobian: Some(Arc::new(|t, _| Ok(Mat2::rotation(TAU * t)))),
            fixed_point_hint: Some(center),
            provenance: Provenance::RigidRotation,
        }
    }

    /// `J_c^k ∘ I`: the same time-one map, with `k` extra turns about `center`.
    pub fn compose_turns(&self, center: Vec2, turns: i64) -> Self {
        let inner = self.eval.clone();
        let inner_jac = self.jacobian.clone();
        let this = self.clone();
        let k = turns as f64;
        PlanarIsotopy {
            eval: Arc::new(move |t, z| Ok(center + (inner(t, z)? - center).rotate(TAU * k * t))),
            jacobian: Some(Arc::new(move |t, z| {
                let j = match &inner_jac {
                    Some(j) => j(t, z)?,
                    None => this.fd_jacobian(t, z)?,
                };
                Ok(Mat2::rotation(TAU * k * t).mul(&j))
            })),
            fixed_point_hint: self.fixed_point_hint.or(Some(center)),
            provenance: Provenance::Composed { turns, base: Box::new(self.provenance.clone()) },
        }
    }

    pub fn eval(&self, t: f64, z: Vec2) -> Result<Vec2> {
        (self.eval)(t, z)
    }

    pub fn time_one(&self, z: Vec2) -> Result<Vec2> {
        (self.eval)(1.0, z)
    }

    pub fn fixed_point_hint(&self) -> Option<Vec2> {
        self.fixed_point_hint
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    fn fd_jacobian(&self, t: f64, z: Vec2) -> Result<Mat2> {
        let h = 1e-6 * z.norm().max(1.0);
        let dx = (self.eval(t, z + Vec2::new(h, 0.0))? - self.eval(t, z - Vec2::new(h, 0.0))?).scale(0.5 / h);
        let dy = (self.eval(t, z + Vec2::new(0.0, h))? - self.eval(t, z - Vec2::new(0.0, h))?).scale(0.5 / h);
        Ok(Mat2::new(dx.x, dy.x, dx.y, dy.y))
    }

    /// `Df_t(z)`, closed form when available, central differences otherwise.
    pub fn jacobian(&self, t: f64, z: Vec2) -> Result<Mat2> {
        match &self.jacobian {
            Some(j) => j(t, z),
            None => self.fd_jacobian(t, z),
        }
    }

    /// Checks `|f_t(center) − center| ≤ 1e−9` on a uniform t-grid.
    pub fn check_fixes(&self, center: Vec2) -> Result<()> {
        for k in 0..=CENTER_T_GRID {
            let t = k as f64 / CENTER_T_GRID as f64;
            let displacement = (self.eval(t, center)? - center).norm();
            if !(displacement <= CENTER_FIXED_TOL) {
                return Err(Error::CenterNotFixed { center, t, displacement });
            }
        }
        Ok(())
    }

    /// Continuous change of angle (in turns) of `f_t(z) − center` for
    /// `t ∈ [0, 1]`: the first cover coordinate of `f̃₁(z̃) − z̃`.
    ///
    /// The t-grid starts at 256 samples and is doubled until two successive
    /// resolutions agree, which catches trajectories that wind faster than
    /// half a turn per sample.
    pub fn angular_displacement(&self, center: Vec2, z: Vec2) -> Result<f64> {
        let vector = |t: f64| -> Result<Vec2> {
            let v = self.eval(t, z)? - center;
            if v.norm() < FIXED_ON_CURVE_TOL * 1e-2 {
                return Err(Error::InvalidArgument(format!("trajectory of {z} passes through the center at t = {t}")));
            }
            Ok(v)
        };
        let track = |n: usize| -> Result<f64> {
            let samples = (0..=n).map(|k| vector(k as f64 / n as f64)).collect::<Result<Vec<_>>>()?;
            let refine = |k: usize, s: f64| vector((k as f64 + s) / n as f64);
            Ok(build_winding_path(&samples, false, Some(&refine))?.total_angle() / TAU)
        };
        let mut n = TRACK_T_SAMPLES;
        let mut previous = track(n)?;
        while n < TRACK_MAX_T_SAMPLES {
            n *= 2;
            let current = track(n)?;
            if (current - previous).abs() < 0.25 {
                return Ok(current);
            }
            previous = current;
        }
        Ok(previous)
    }

    /// `f̃₁(θ, y)` for the lift pinned by `f̃₀ = id`, in cover coordinates
    /// centered at `center`.
    pub fn lift_time_one(&self, center: Vec2, p: CoverPoint) -> Result<CoverPoint> {
        let z = center + cover_project(p);
        let w = self.time_one(z)? - center;
        let r = w.norm();
        if !(r > 0.0) {
            return Err(Error::OriginNotInCover);
        }
        Ok(CoverPoint { theta: p.theta + self.angular_displacement(center, z)?, y: -r })
    }
}

fn check_samples(samples: usize, minimum: usize) -> Result<usize> {
    if samples < minimum {
        return Err(Error::InvalidArgument(format!("need at least {minimum} samples, got {samples}")));
    }
    Ok(samples)
}

/// Degree of `s ↦ f(γ(s)) − γ(s)` along the positively oriented circle
/// `γ` of `radius` about `center`.
pub fn lefschetz_index<F>(f: F, center: Vec2, radius: f64, samples: usize) -> Result<i64>
where
    F: Fn(Vec2) -> Result<Vec2>,
{
    let samples = check_samples(samples, 64)?;
    let displacement = |s: f64, k: usize| -> Result<Vec2> {
        let z = center + Vec2::polar(TAU * s).scale(radius);
        let d = f(z)? - z;
        if !(d.norm() >= FIXED_ON_CURVE_TOL) {
            return Err(Error::FixedPointOnCurve(k));
        }
        Ok(d)
    };
    let vectors = (0..samples).map(|k| displacement(k as f64 / samples as f64, k)).collect::<Result<Vec<_>>>()?;
    let refine = |k: usize, s: f64| displacement((k as f64 + s) / samples as f64, k);
    winding_number(&build_winding_path(&vectors, true, Some(&refine))?)
}

/// Degree of the lifted displacement `f̃₁(z̃) − z̃` along the cover path
/// from `(0, −radius)` to `(1, −radius)`.
pub fn isotopy_index(iso: &PlanarIsotopy, center: Vec2, radius: f64, samples: usize) -> Result<i64> {
    let samples = check_samples(samples, 8)?;
    iso.check_fixes(center)?;
    let displacement = |s: f64| -> Result<Vec2> {
        let z = center + Vec2::polar(TAU * s).scale(radius);
        let w = iso.time_one(z)?;
        if !((w - z).norm() >= FIXED_ON_CURVE_TOL) {
            return Err(Error::FixedPointOnCurve((s * samples as f64).round() as usize));
        }
        let dtheta = iso.angular_displacement(center, z)?;
        Ok(Vec2::new(dtheta, radius - (w - center).norm()))
    };
    loop_winding(displacement, samples)
}

/// Degree of `t ↦ f_t(z0) − f_t(z1)` over the closed time loop.
pub fn linking_number(iso: &PlanarIsotopy, z0: Vec2, z1: Vec2, t_samples: usize) -> Result<i64> {
    for (which, z) in [("z0", z0), ("z1", z1)] {
        if !((iso.time_one(z)? - z).norm() <= CENTER_FIXED_TOL) {
            return Err(Error::NotFixed { which, at: z });
        }
    }
    let difference = |t: f64| -> Result<Vec2> {
        let d = iso.eval(t, z0)? - iso.eval(t, z1)?;
        if !(d.norm() >= FIXED_ON_CURVE_TOL) {
            return Err(Error::TrajectoryCollision(t));
        }
        Ok(d)
    };
    loop_winding(difference, check_samples(t_samples, 4)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Less,
    Greater,
    Equivalent,
    Incomparable,
}

/// Verdict of [`compare_isotopies`] on its sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsotopyOrder {
    pub relation: Relation,
    /// For Less/Greater, a sample where the inequality is strict; for
    /// Incomparable, a sample contradicting the majority sign.
    pub witness: Option<CoverPoint>,
    /// Extremes of `p₁f̃′₁ − p₁f̃₁` over the grid.
    pub min_gap: f64,
    pub max_gap: f64,
}

/// Compares the first cover coordinates of the two lifted time-one maps on
/// a `grid × grid` sample of `[0, 1) × (−radius, 0)`.
pub fn compare_isotopies(a: &PlanarIsotopy, b: &PlanarIsotopy, center: Vec2, radius: f64, grid: usize) -> Result<IsotopyOrder> {
    let grid = check_samples(grid, 2)?;
    a.check_fixes(center)?;
    b.check_fixes(center)?;
    let mut gaps = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            let p = CoverPoint { theta: i as f64 / grid as f64, y: -radius * (j as f64 + 0.5) / grid as f64 };
            let pa = a.lift_time_one(center, p)?;
            let pb = b.lift_time_one(center, p)?;
            gaps.push((p, pb.theta - pa.theta));
        }
    }
    let min_gap = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    let max_gap = gaps.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
    let strict_pos = gaps.iter().find(|g| g.1 > ORDER_TOL).map(|g| g.0);
    let strict_neg = gaps.iter().find(|g| g.1 < -ORDER_TOL).map(|g| g.0);
    let (relation, witness) = match (strict_pos, strict_neg) {
        (None, None) => (Relation::Equivalent, None),
        (Some(w), None) => (Relation::Less, Some(w)),
        (None, Some(w)) => (Relation::Greater, Some(w)),
        (Some(_), Some(w)) => (Relation::Incomparable, Some(w)),
    };
    Ok(IsotopyOrder { relation, witness, min_gap, max_gap })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexRelationReport {
    pub lefschetz: i64,
    pub isotopy: i64,
    pub foliation: i64,
    /// `i(F) = i(I) + 1`.
    pub foliation_equals_isotopy_plus_one: bool,
    /// `i(f) = i(F)`; `None` when `i(F) = 1` and the identity says nothing.
    pub lefschetz_equals_foliation: Option<bool>,
    /// Worst verdict of the trajectories sampled on the test circle against `F`.
    pub transversality: Option<Verdict>,
}

/// Computes `i(f)`, `i(I)` and `i(F)` at `z0` on circles of `radius` and
/// checks the two index identities.
pub fn index_relation_check(
    iso: &PlanarIsotopy,
    foliation: &Foliation,
    z0: Vec2,
    radius: f64,
    samples: usize,
) -> Result<IndexRelationReport> {
    let lefschetz = lefschetz_index(|z| iso.time_one(z), z0, radius, samples)?;
    let isotopy = isotopy_index(iso, z0, radius, samples)?;
    let foliation_index = crate::foliate::classify_singularity(foliation, z0, radius, samples)?.foliation_index;
    let mut worst: Option<Verdict> = None;
    for k in 0..8 {
        let z = z0 + Vec2::polar(TAU * k as f64 / 8.0).scale(radius);
        let path = sample_path(|t| iso.eval(t, z), 64)?;
        let verdict = match transversality_report(&path, foliation, 1e-12) {
            Ok(r) => r.verdict,
            Err(Error::AllStationary) => continue,
            Err(e) => return Err(e),
        };
        worst = Some(match (worst, verdict) {
            (Some(Verdict::Negative), _) | (_, Verdict::Negative) => Verdict::Negative,
            (Some(Verdict::Tangent), _) | (_, Verdict::Tangent) => Verdict::Tangent,
            _ => Verdict::PositivelyTransverse,
        });
    }
    Ok(IndexRelationReport {
        lefschetz,
        isotopy,
        foliation: foliation_index,
        foliation_equals_isotopy_plus_one: foliation_index == isotopy + 1,
        lefschetz_equals_foliation: (foliation_index != 1).then_some(lefschetz == foliation_index),
        transversality: worst,
    })
}
