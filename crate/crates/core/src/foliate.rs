//! Oriented singular foliations given by direction fields: leaf tracing,
//! positive transversality of paths, and sink/source/saddle classification.

use crate::error::{Error, Result};
use crate::expr::{Expr, ScalarField};
use crate::geom::{build_winding_path, winding_number};
use crate::linalg::{Mat2, Rect, Vec2};
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::Arc;

pub const DEFAULT_SINGULAR_TOL: f64 = 1e-10;

/// Normalized-sine threshold below which a crossing counts as tangent.
pub const TANGENT_TOL: f64 = 1e-9;

/// Radial components smaller than this make the classifier give up.
pub const RADIAL_TOL: f64 = 1e-12;

pub type DirectionFn = Arc<dyn Fn(Vec2) -> Result<Vec2> + Send + Sync>;

/// A direction field whose integral curves are the leaves.
#[derive(Clone)]
pub struct Foliation {
    direction: DirectionFn,
    singular_tol: f64,
    domain: Option<Rect>,
    singularities: Vec<Vec2>,
    description: String,
}

impl std::fmt::Debug for Foliation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Foliation")
            .field("description", &self.description)
            .field("singular_tol", &self.singular_tol)
            .field("domain", &self.domain)
            .field("singularities", &self.singularities)
            .finish()
    }
}

impl Foliation {
    pub fn new<F>(description: impl Into<String>, direction: F) -> Self
    where
        F: Fn(Vec2) -> Result<Vec2> + Send + Sync + 'static,
    {
        Foliation {
            direction: Arc::new(direction),
            singular_tol: DEFAULT_SINGULAR_TOL,
            domain: None,
            singularities: Vec::new(),
            description: description.into(),
        }
    }

    /// Leaves stop with [`StopReason::DomainExit`] when they leave `domain`.
    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = Some(domain);
        self
    }

    /// Singular points known in advance (for fields that are discontinuous
    /// or non-vanishing-but-undefined there, like a cover pushed to the plane).
    pub fn with_singularities(mut self, points: Vec<Vec2>) -> Self {
        self.singularities = points;
        self
    }

    pub fn with_singular_tol(mut self, tol: f64) -> Self {
        self.singular_tol = tol;
        self
    }

    pub fn direction(&self, z: Vec2) -> Result<Vec2> {
        (self.direction)(z)
    }

    pub fn singular_tol(&self) -> f64 {
        self.singular_tol
    }

    pub fn domain(&self) -> Option<Rect> {
        self.domain
    }

    pub fn singularities(&self) -> &[Vec2] {
        &self.singularities
    }

    pub fn describe(&self) -> &str {
        &self.description
    }

    /// Same leaves, opposite orientation.
    pub fn reversed(&self) -> Foliation {
        let inner = self.direction.clone();
        Foliation {
            direction: Arc::new(move |z| Ok(-inner(z)?)),
            singular_tol: self.singular_tol,
            domain: self.domain,
            singularities: self.singularities.clone(),
            description: format!("reversed({})", self.description),
        }
    }
}

/// Leaves are the integral curves of `∇g`.
pub fn gradient_foliation(g: Arc<dyn ScalarField>) -> Foliation {
    let description = format!("grad({})", g.describe());
    Foliation::new(description, move |z| g.gradient(z))
}

/// Leaves are the integral curves of `(fx(x, y), fy(x, y))`.
pub fn expression_foliation(fx: Expr, fy: Expr) -> Foliation {
    let description = format!("({fx}, {fy})");
    Foliation::new(description, move |z| Ok(Vec2::new(fx.eval(z.x, z.y)?, fy.eval(z.x, z.y)?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    MaxLength,
    DomainExit,
    /// Reached `stop_radius` of a singular point, or the field degenerated.
    SingularStop {
        near: Vec2,
    },
}

/// A traced leaf; `arclength[k]` is the parameter of `vertices[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Leaf {
    pub vertices: Vec<Vec2>,
    pub arclength: Vec<f64>,
    pub stop: StopReason,
}

fn unit_field(f: &Foliation, z: Vec2) -> Result<Option<Vec2>> {
    let d = f.direction(z)?;
    let n = d.norm();
    if !(n >= f.singular_tol) || !d.is_finite() {
        return Ok(None);
    }
    Ok(Some(d.scale(1.0 / n)))
}

/// Newton on the field with a finite-difference Jacobian; used to place a
/// zero the integrator stepped over.
fn locate_zero(f: &Foliation, start: Vec2, scale: f64) -> Option<Vec2> {
    let mut z = start;
    let h = (scale * 1e-3).max(1e-9);
    for _ in 0..50 {
        let d = f.direction(z).ok()?;
        if d.norm() < f.singular_tol {
            return Some(z);
        }
        let dx = (f.direction(z + Vec2::new(h, 0.0)).ok()? - f.direction(z - Vec2::new(h, 0.0)).ok()?).scale(0.5 / h);
        let dy = (f.direction(z + Vec2::new(0.0, h)).ok()? - f.direction(z - Vec2::new(0.0, h)).ok()?).scale(0.5 / h);
        let jac = Mat2::new(dx.x, dy.x, dx.y, dy.y);
        let step = jac.inverse()?.apply(d);
        if !step.is_finite() || step.norm() > 10.0 * scale {
            return None;
        }
        z = z - step;
        if step.norm() < 1e-15 * z.norm().max(1.0) {
            break;
        }
    }
    (f.direction(z).ok()?.norm() < f.singular_tol.max(1e-8)).then_some(z)
}

enum Stage {
    Dir(Vec2),
    Outside,
    Singular,
}

/// Traces the forward leaf through `z0` by fixed-step RK4 on the normalized
/// field, so `step` is (approximately) arclength.
pub fn integrate_leaf(f: &Foliation, z0: Vec2, step: f64, max_len: f64, stop_radius: f64) -> Result<Leaf> {
    if !(step > 0.0) || !(max_len > 0.0) || !(stop_radius >= 0.0) {
        return Err(Error::InvalidArgument("step and max_len must be positive".into()));
    }
    if unit_field(f, z0)?.is_none() {
        return Err(Error::StartsSingular(z0));
    }
    let mut vertices = vec![z0];
    let mut arclength = vec![0.0];
    let mut z = z0;
    let mut s = 0.0;
    let mut last_dir: Option<Vec2> = None;
    let stop = loop {
        if let Some(&p) = f.singularities.iter().find(|&&p| (z - p).norm() <= stop_radius) {
            break StopReason::SingularStop { near: p };
        }
        if s >= max_len {
            break StopReason::MaxLength;
        }
        let h = step.min(max_len - s);
        let stage = |p: Vec2| -> Result<Stage> {
            if f.domain.is_some_and(|d| !d.contains(p)) {
                return Ok(Stage::Outside);
            }
            match unit_field(f, p) {
                Ok(Some(u)) => Ok(Stage::Dir(u)),
                Ok(None) => Ok(Stage::Singular),
                Err(Error::Domain { .. }) => Ok(Stage::Outside),
                Err(e) => Err(e),
            }
        };
        let mut ks = [Vec2::ZERO; 4];
        let mut halt = None;
        for i in 0..4 {
            let p = match i {
                0 => z,
                1 | 2 => z + ks[i - 1].scale(0.5 * h),
                _ => z + ks[2].scale(h),
            };
            match stage(p)? {
                Stage::Dir(u) => ks[i] = u,
                Stage::Outside => halt = Some(StopReason::DomainExit),
                Stage::Singular => halt = Some(StopReason::SingularStop { near: p }),
            }
            if halt.is_some() {
                break;
            }
        }
        if let Some(reason) = halt {
            break reason;
        }
        let [k1, k2, k3, k4] = ks;
        let dir = (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(1.0 / 6.0);
        // A reversal over one step means the leaf crossed a zero of the field.
        let flipped = last_dir.is_some_and(|prev| prev.dot(dir) < 0.0) || k1.dot(k4) < 0.0 || dir.norm() < 1e-3;
        if flipped {
            let near = locate_zero(f, z, step).unwrap_or(z);
            break StopReason::SingularStop { near };
        }
        let next = z + dir.scale(h);
        if let Some(d) = f.domain {
            if !d.contains(next) {
                break StopReason::DomainExit;
            }
        }
        z = next;
        s += h;
        vertices.push(z);
        arclength.push(s);
        last_dir = Some(dir);
        if unit_field(f, z).map_or(true, |u| u.is_none()) {
            break StopReason::SingularStop { near: z };
        }
    };
    Ok(Leaf { vertices, arclength, stop })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    PositivelyTransverse,
    Tangent,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalityReport {
    /// Smallest `det[v | d]` over non-stationary segments.
    pub min_det: f64,
    /// Smallest normalized sine `det[v | d] / (|v||d|)`.
    pub min_sine: f64,
    /// First segment midpoint `(parameter, point)` that is not strictly positive.
    pub first_violation: Option<(f64, Vec2)>,
    pub samples_used: usize,
    pub verdict: Verdict,
}

/// Checks that a parametrized polyline crosses the leaves from left to
/// right, i.e. `det[velocity | direction] > 0` at every segment midpoint.
pub fn transversality_report(path: &[(f64, Vec2)], f: &Foliation, stationary_tol: f64) -> Result<TransversalityReport> {
    if path.len() < 2 {
        return Err(Error::InvalidArgument("a path needs at least two vertices".into()));
    }
    let mut min_det = f64::INFINITY;
    let mut min_sine = f64::INFINITY;
    let mut first_violation = None;
    let mut used = 0;
    for w in path.windows(2) {
        let ((t0, p0), (t1, p1)) = (w[0], w[1]);
        let dt = t1 - t0;
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument("path parameters must increase".into()));
        }
        let v = (p1 - p0).scale(1.0 / dt);
        if v.norm() < stationary_tol {
            continue;
        }
        used += 1;
        let mid = (p0 + p1).scale(0.5);
        let d = f.direction(mid)?;
        let det = v.cross(d);
        let dn = d.norm();
        let sine = if dn < f.singular_tol { 0.0 } else { det / (v.norm() * dn) };
        min_det = min_det.min(det);
        min_sine = min_sine.min(sine);
        if sine <= TANGENT_TOL && first_violation.is_none() {
            first_violation = Some((0.5 * (t0 + t1), mid));
        }
    }
    if used == 0 {
        return Err(Error::AllStationary);
    }
    let verdict = if min_sine < -TANGENT_TOL {
        Verdict::Negative
    } else if min_sine <= TANGENT_TOL {
        Verdict::Tangent
    } else {
        Verdict::PositivelyTransverse
    };
    Ok(TransversalityReport { min_det, min_sine, first_violation, samples_used: used, verdict })
}

/// Samples `t ↦ path(t)` at `n + 1` uniform parameters in `[0, 1]`.
pub fn sample_path<F>(path: F, n: usize) -> Result<Vec<(f64, Vec2)>>
where
    F: Fn(f64) -> Result<Vec2>,
{
    let n = n.max(1);
    (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            Ok((t, path(t)?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularityClass {
    Sink,
    Source,
    Saddle,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Singularity {
    pub class: SingularityClass,
    pub foliation_index: i64,
}

/// Winding of the direction field along the circle of `radius` about `z0`
/// and the radial sign test for sinks and sources.
pub fn classify_singularity(f: &Foliation, z0: Vec2, radius: f64, samples: usize) -> Result<Singularity> {
    if !(radius > 0.0) || samples < 4 {
        return Err(Error::InvalidArgument("radius must be positive and samples ≥ 4".into()));
    }
    let point = |s: f64| z0 + Vec2::polar(TAU * s).scale(radius);
    let mut field = Vec::with_capacity(samples);
    let (mut inward, mut outward, mut flat) = (0usize, 0usize, 0usize);
    for k in 0..samples {
        let s = k as f64 / samples as f64;
        let d = f.direction(point(s))?;
        if !(d.norm() >= f.singular_tol) {
            return Err(Error::SingularOnCircle(k));
        }
        let radial = d.dot(Vec2::polar(TAU * s)) / d.norm();
        if radial.abs() < RADIAL_TOL {
            flat += 1;
        } else if radial < 0.0 {
            inward += 1;
        } else {
            outward += 1;
        }
        field.push(d);
    }
    let refine = |k: usize, s: f64| -> Result<Vec2> {
        let d = f.direction(point((k as f64 + s) / samples as f64))?;
        if !(d.norm() >= f.singular_tol) {
            return Err(Error::SingularOnCircle(k));
        }
        Ok(d)
    };
    let index = winding_number(&build_winding_path(&field, true, Some(&refine))?)?;
    let class = match index {
        1 if flat == 0 && outward == 0 => SingularityClass::Sink,
        1 if flat == 0 && inward == 0 => SingularityClass::Source,
        i if i <= 0 && inward > 0 && outward > 0 => SingularityClass::Saddle,
        _ => SingularityClass::Unknown,
    };
    Ok(Singularity { class, foliation_index: index })
}
