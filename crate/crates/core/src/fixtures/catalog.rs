//! Builders for the eight fixtures.

use super::ex5::{Phi, Sin2Field};
use super::{Basis, Claim, NamedPoint, Scenario, ScenarioKind, System, Value};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, ScalarField};
use crate::foliate::{
    classify_singularity, gradient_foliation, integrate_leaf, sample_path, transversality_report, Foliation, SingularityClass,
    StopReason, Verdict,
};
use crate::genfunc::GenIsotopy;
use crate::geom::circle_rotation_number;
use crate::indices::{isotopy_index, lefschetz_index, linking_number, PlanarIsotopy, Provenance};
use crate::linalg::{Rect, Vec2};
use crate::rotation::{
    isotopy_blowup_rotation, local_rotation_set_estimate, rotation_samples, torsion_low_classify, twist_check_and_search,
    AnnulusLiftMap, EstimateParams,
};
use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

/// `(t, (x, y)) ↦ f_t(x, y)` on the cylinder `ℝ × [0, 1]`, `x` in turns.
pub type CylinderIsotopy = Arc<dyn Fn(f64, Vec2) -> Vec2 + Send + Sync>;

/// The isotopy seen from the bottom end, in the chart `w = y·e^{−2πix}`.
pub fn cylinder_to_south(description: &str, f: CylinderIsotopy) -> Result<PlanarIsotopy> {
    let eval = move |t: f64, w: Vec2| {
        let r = w.norm();
        if r == 0.0 {
            return Ok(Vec2::ZERO);
        }
        let p = f(t, Vec2::new(-w.angle() / TAU, r));
        Ok(Vec2::polar(-TAU * p.x).scale(p.y))
    };
    PlanarIsotopy::new(Provenance::UserExpression(format!("{description}, chart w = y·e^(−2πix)")), Some(Vec2::ZERO), eval)
}

/// The isotopy seen from the top end, in the chart `w = (1 − y)·e^{2πix}`.
pub fn cylinder_to_north(description: &str, f: CylinderIsotopy) -> Result<PlanarIsotopy> {
    let eval = move |t: f64, w: Vec2| {
        let r = w.norm();
        if r == 0.0 {
            return Ok(Vec2::ZERO);
        }
        let p = f(t, Vec2::new(w.angle() / TAU, 1.0 - r));
        Ok(Vec2::polar(TAU * p.x).scale(1.0 - p.y))
    };
    PlanarIsotopy::new(Provenance::UserExpression(format!("{description}, chart w = (1−y)·e^(2πix)")), Some(Vec2::ZERO), eval)
}

struct ClaimSpec {
    id: &'static str,
    description: &'static str,
    operation: &'static str,
    arguments: &'static [(&'static str, &'static str)],
    expected: Value,
    tolerance: f64,
    basis: Basis,
}

fn claim<F>(spec: ClaimSpec, run: F) -> Claim
where
    F: Fn() -> Result<Value> + Send + Sync + 'static,
{
    Claim {
        id: spec.id,
        description: spec.description,
        operation: spec.operation,
        arguments: spec.arguments.iter().map(|(k, v)| (*k, v.to_string())).collect(),
        expected: spec.expected,
        tolerance: spec.tolerance,
        basis: spec.basis,
        run: Arc::new(run),
    }
}

fn definition(entries: &[(&'static str, &str)]) -> BTreeMap<&'static str, String> {
    entries.iter().map(|(k, v)| (*k, v.to_string())).collect()
}

fn plane_point(name: &'static str, location: Vec2) -> NamedPoint {
    NamedPoint { name, location, chart: None, isotopy: None, foliation: None }
}

fn label<T: std::fmt::Debug>(v: T) -> Value {
    Value::label(format!("{v:?}"))
}

/// Translation number of a boundary circle, read through a chart that
/// turns `x` by `sign` turns per unit.
fn boundary_rotation(f: &CylinderIsotopy, y: f64, sign: f64) -> Result<f64> {
    let rho = circle_rotation_number(|x| f(1.0, Vec2::new(x, y)).x, 1000, 0.0)?;
    Ok(sign * rho + 0.0)
}

fn circle_points(center: Vec2, radius: f64, count: usize) -> Vec<Vec2> {
    (0..count).map(|k| center + Vec2::polar(TAU * (k as f64 + 0.5) / count as f64).scale(radius)).collect()
}

/// Worst transversality verdict of the trajectories `t ↦ f_t(z)` against `f`.
fn worst_verdict(iso: &PlanarIsotopy, f: &Foliation, starts: &[Vec2]) -> Result<Verdict> {
    let mut worst = Verdict::PositivelyTransverse;
    for &z in starts {
        let path = sample_path(|t| iso.eval(t, z), 64)?;
        match transversality_report(&path, f, 1e-12)?.verdict {
            Verdict::Negative => return Ok(Verdict::Negative),
            Verdict::Tangent => worst = Verdict::Tangent,
            Verdict::PositivelyTransverse => {}
        }
    }
    Ok(worst)
}

fn sphere_point(name: &'static str, chart: &'static str, isotopy: PlanarIsotopy) -> NamedPoint {
    NamedPoint { name, location: Vec2::ZERO, chart: Some(chart), isotopy: Some(isotopy), foliation: None }
}

const SOUTH_CHART: &str = "w = y·e^(−2πix)";
const NORTH_CHART: &str = "w = (1−y)·e^(2πix)";

pub(super) fn ex1_homothety() -> Result<Scenario> {
    let iso = PlanarIsotopy::new(Provenance::UserExpression("(1+t)·z".into()), Some(Vec2::ZERO), |t, z| Ok(z.scale(1.0 + t)))?
        .with_jacobian(|t, _| Ok(crate::linalg::Mat2::diag(1.0 + t, 1.0 + t)));
    // Cover lines y = θ + c upward and y = −θ + c downward, pushed to the plane.
    let leaf_field = |radial: f64| {
        move |z: Vec2| {
            let r = z.norm();
            if r == 0.0 {
                return Ok(Vec2::ZERO);
            }
            Ok(z.perp().scale(TAU) + z.scale(radial / r))
        }
    };
    let f1 = Foliation::new("cover lines y = θ + c, upward", leaf_field(-1.0)).with_singularities(vec![Vec2::ZERO]);
    let f2 = Foliation::new("cover lines y = −θ + c, downward", leaf_field(1.0)).with_singularities(vec![Vec2::ZERO]);
    let starts = circle_points(Vec2::ZERO, 0.5, 16);

    let claims = vec![
        claim(
            ClaimSpec {
                id: "lefschetz_at_0",
                description: "i(f, 0) for f = 2·id",
                operation: "lefschetz_index",
                arguments: &[("center", "0,0"), ("radius", "1"), ("samples", "64")],
                expected: Value::Int(1),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "sign det(L − I) with L = 2I" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Int(lefschetz_index(|z| iso.time_one(z), Vec2::ZERO, 1.0, 64)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "isotopy_index_at_0",
                description: "i(I, 0) for the homothety isotopy",
                operation: "isotopy_index",
                arguments: &[("center", "0,0"), ("radius", "1"), ("samples", "32")],
                expected: Value::Int(0),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "all local isotopies at 0 have index 0" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Int(isotopy_index(&iso, Vec2::ZERO, 1.0, 32)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "f1_transverse",
                description: "trajectories cross F₁ from left to right",
                operation: "transversality_report",
                arguments: &[("starts", "16 points on |z| = 0.5"), ("t_samples", "64")],
                expected: label(Verdict::PositivelyTransverse),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "F₁ is locally transverse to I" },
            },
            {
                let (iso, f1, starts) = (iso.clone(), f1.clone(), starts.clone());
                move || Ok(label(worst_verdict(&iso, &f1, &starts)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "f1_sink",
                description: "0 is a sink of F₁",
                operation: "classify_singularity",
                arguments: &[("center", "0,0"), ("radius", "0.5"), ("samples", "128")],
                expected: label(SingularityClass::Sink),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "0 is a sink of F₁" },
            },
            {
                let f1 = f1.clone();
                move || Ok(label(classify_singularity(&f1, Vec2::ZERO, 0.5, 128)?.class))
            },
        ),
        claim(
            ClaimSpec {
                id: "f2_transverse",
                description: "trajectories cross F₂ from left to right",
                operation: "transversality_report",
                arguments: &[("starts", "16 points on |z| = 0.5"), ("t_samples", "64")],
                expected: label(Verdict::PositivelyTransverse),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "F₂ is locally transverse to I" },
            },
            {
                let (iso, f2, starts) = (iso.clone(), f2.clone(), starts);
                move || Ok(label(worst_verdict(&iso, &f2, &starts)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "f2_source",
                description: "0 is a source of F₂",
                operation: "classify_singularity",
                arguments: &[("center", "0,0"), ("radius", "0.5"), ("samples", "128")],
                expected: label(SingularityClass::Source),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "0 is a source of F₂" },
            },
            {
                let f2 = f2.clone();
                move || Ok(label(classify_singularity(&f2, Vec2::ZERO, 0.5, 128)?.class))
            },
        ),
    ];
    Ok(Scenario {
        name: "ex1_homothety",
        kind: ScenarioKind::ExplicitIsotopy,
        summary: "Homothety of factor 1 + t: both a sink and a source foliation are transverse.",
        definition: definition(&[
            ("isotopy", "f_t(z) = (1 + t)·z"),
            ("foliation", "F₁: 2π·(−y, x) − (x, y)/|z|"),
            ("foliation_2", "F₂: 2π·(−y, x) + (x, y)/|z|"),
        ]),
        points: vec![NamedPoint { foliation: Some(f1.clone()), ..plane_point("origin", Vec2::ZERO) }],
        claims,
        system: System {
            isotopy: Some(iso),
            foliation: Some(f1),
            region: Some(Rect::new(-2.0, 2.0, -2.0, 2.0)),
            ..System::default()
        },
    })
}

/// The quadrant-defined flow. Boundary rays belong to the closed quadrants
/// named in the definition, checked in the same order.
pub fn ex2_flow(t: f64, z: Vec2) -> Vec2 {
    let (x, y) = (z.x, z.y);
    let (shrink, grow) = ((-t).exp(), t.exp());
    if x >= 0.0 && y >= 0.0 {
        let r2 = x * x + y * y;
        if r2 == 0.0 {
            return Vec2::ZERO;
        }
        let k = r2 / (x * x * shrink * shrink + y * y * grow * grow);
        Vec2::new(k * x * shrink, k * y * grow)
    } else if x <= 0.0 && y >= 0.0 {
        Vec2::new(x * shrink, y * shrink)
    } else if x <= 0.0 && y <= 0.0 {
        Vec2::new(x * shrink, y * grow)
    } else {
        Vec2::new(x * grow, y * grow)
    }
}

/// The vector field generating [`ex2_flow`].
pub fn ex2_field(z: Vec2) -> Vec2 {
    let (x, y) = (z.x, z.y);
    if x > 0.0 && y > 0.0 {
        let r2 = x * x + y * y;
        Vec2::new(x * (x * x - 3.0 * y * y) / r2, y * (3.0 * x * x - y * y) / r2)
    } else if x <= 0.0 && y >= 0.0 {
        Vec2::new(-x, -y)
    } else if x <= 0.0 && y <= 0.0 {
        Vec2::new(-x, y)
    } else {
        Vec2::new(x, y)
    }
}

/// The leaf field of the sink foliation.
pub fn ex2_xi(z: Vec2) -> Vec2 {
    let (x, y) = (z.x, z.y);
    if x > 0.0 && y > 0.0 {
        let r2 = x * x + y * y;
        Vec2::new(-y * (3.0 * x * x - y * y) / r2, x * (x * x - 3.0 * y * y) / r2)
    } else if x <= 0.0 && y >= 0.0 {
        Vec2::new(y, -x)
    } else if x <= 0.0 && y <= 0.0 {
        Vec2::new(-y, -x)
    } else {
        Vec2::new(-y, x)
    }
}

pub(super) fn ex2_piecewise_flow() -> Result<Scenario> {
    let iso =
        PlanarIsotopy::new(Provenance::UserExpression("quadrant flow of V".into()), Some(Vec2::ZERO), |t, z| Ok(ex2_flow(t, z)))?;
    let xi = Foliation::new("ξ, quadrant by quadrant", |z| Ok(ex2_xi(z))).with_singularities(vec![Vec2::ZERO]);
    let starts: Vec<Vec2> = circle_points(Vec2::ZERO, 0.5, 12).into_iter().chain(circle_points(Vec2::ZERO, 1.0, 12)).collect();

    let claims = vec![
        claim(
            ClaimSpec {
                id: "lefschetz_at_0",
                description: "i(f, 0) for the time-one map of the flow",
                operation: "lefschetz_index",
                arguments: &[("center", "0,0"), ("radius", "1"), ("samples", "256")],
                expected: Value::Int(1),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "degree of V on the unit circle: 3/4 + 1/4 − 1/4 + 1/4 turns by quadrant" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Int(lefschetz_index(|z| iso.time_one(z), Vec2::ZERO, 1.0, 256)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "isotopy_index_at_0",
                description: "i(I, 0) for the flow isotopy",
                operation: "isotopy_index",
                arguments: &[("center", "0,0"), ("radius", "1"), ("samples", "64")],
                expected: Value::Int(0),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "a transverse foliation with a sink has index 1 = i(I) + 1" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Int(isotopy_index(&iso, Vec2::ZERO, 1.0, 64)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "xi_transverse",
                description: "flow lines cross the ξ leaves from left to right",
                operation: "transversality_report",
                arguments: &[("starts", "12 points on each of |z| = 0.5, 1"), ("t_samples", "64")],
                expected: label(Verdict::PositivelyTransverse),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "det(V, ξ) > 0 away from 0" },
            },
            {
                let (iso, xi, starts) = (iso.clone(), xi.clone(), starts);
                move || Ok(label(worst_verdict(&iso, &xi, &starts)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "xi_index",
                description: "winding of ξ around 0",
                operation: "classify_singularity",
                arguments: &[("center", "0,0"), ("radius", "1"), ("samples", "256")],
                expected: Value::Int(1),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "ξ is V turned by a quarter turn, so it winds like V" },
            },
            {
                let xi = xi.clone();
                move || Ok(Value::Int(classify_singularity(&xi, Vec2::ZERO, 1.0, 256)?.foliation_index))
            },
        ),
        claim(
            ClaimSpec {
                id: "xi_leaf_reaches_0",
                description: "the ξ leaf through (−0.5, 0.3) ends at 0",
                operation: "integrate_leaf",
                arguments: &[("start", "-0.5,0.3"), ("step", "0.005"), ("max_length", "10"), ("stop_radius", "0.01")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "every integral curve of ξ goes to 0" },
            },
            {
                let xi = xi.clone();
                move || {
                    let leaf = integrate_leaf(&xi, Vec2::new(-0.5, 0.3), 0.005, 10.0, 0.01)?;
                    Ok(Value::Bool(matches!(leaf.stop, StopReason::SingularStop { near } if near.norm() < 0.02)))
                }
            },
        ),
    ];
    Ok(Scenario {
        name: "ex2_piecewise_flow",
        kind: ScenarioKind::PiecewiseFlow,
        summary: "A continuous quadrant-wise flow and the sink foliation of ξ.",
        definition: definition(&[
            (
                "field",
                "V = (x(x²−3y²), y(3x²−y²))/(x²+y²) on x,y > 0; (−x,−y) on x ≤ 0 ≤ y; (−x, y) on x,y ≤ 0; (x, y) on y ≤ 0 ≤ x",
            ),
            ("foliation", "ξ = V turned a quarter turn counterclockwise"),
        ]),
        points: vec![NamedPoint { foliation: Some(xi.clone()), ..plane_point("origin", Vec2::ZERO) }],
        claims,
        system: System {
            isotopy: Some(iso),
            foliation: Some(xi),
            region: Some(Rect::new(-1.0, 1.0, -1.0, 1.0)),
            ..System::default()
        },
    })
}

/// `z ↦ z·e^{2πit/|z|}`: the lift `(θ, y) ↦ (θ − t/y, y)` pushed to the
/// punctured disk and extended by `0 ↦ 0`.
fn ex3_isotopy() -> Result<PlanarIsotopy> {
    PlanarIsotopy::new(Provenance::UserExpression("z·e^(2πit/|z|)".into()), Some(Vec2::ZERO), |t, z| {
        let r = z.norm();
        if r == 0.0 {
            return Ok(Vec2::ZERO);
        }
        Ok(z.rotate(TAU * t / r))
    })
}

fn min_abs_rho(iso: &PlanarIsotopy, u: f64) -> Result<f64> {
    let samples = rotation_samples(iso, Vec2::ZERO, u, u / 4.0, 4, 64)?;
    if samples.is_empty() {
        return Err(Error::NoSamples(format!("E({u}, {}, 4)", u / 4.0)));
    }
    Ok(samples.iter().map(|s| s.rho.abs()).fold(f64::INFINITY, f64::min))
}

pub(super) fn ex3_annulus_escape() -> Result<Scenario> {
    let iso = ex3_isotopy()?;
    let claims = vec![
        claim(
            ClaimSpec {
                id: "escape_band_0.05",
                description: "every sample in E(0.05, 0.0125, 4) has |ρ₄| ≥ 20",
                operation: "rotation_samples",
                arguments: &[("center", "star"), ("U", "0.05"), ("V", "0.0125"), ("n", "4"), ("seeds", "64")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "the local rotation set at the added point is reduced to ∞" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Bool(min_abs_rho(&iso, 0.05)? >= 20.0))
            },
        ),
        claim(
            ClaimSpec {
                id: "escape_band_0.025",
                description: "halving the band: every sample in E(0.025, 0.00625, 4) has |ρ₄| ≥ 40",
                operation: "rotation_samples",
                arguments: &[("center", "star"), ("U", "0.025"), ("V", "0.00625"), ("n", "4"), ("seeds", "64")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "ρ_n = −1/y = 1/|z| on the cover" },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Bool(min_abs_rho(&iso, 0.025)? >= 40.0))
            },
        ),
        claim(
            ClaimSpec {
                id: "closed_form_rho",
                description: "largest deviation of ρ₄ from 1/|z| over E(0.05, 0.0125, 4)",
                operation: "rotation_samples",
                arguments: &[("center", "star"), ("U", "0.05"), ("V", "0.0125"), ("n", "4"), ("seeds", "64")],
                expected: Value::Real(0.0),
                tolerance: 1e-9,
                basis: Basis::Derived { oracle: "ρ_n = −1/y = 1/|z| on the cover" },
            },
            {
                let iso = iso.clone();
                move || {
                    let samples = rotation_samples(&iso, Vec2::ZERO, 0.05, 0.0125, 4, 64)?;
                    Ok(Value::Real(samples.iter().map(|s| (s.rho - 1.0 / s.start.norm()).abs()).fold(0.0, f64::max)))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "estimate_diverges",
                description: "the deep-level estimate runs past +10",
                operation: "local_rotation_set_estimate",
                arguments: &[("center", "star"), ("r0", "0.05"), ("levels", "3"), ("n_max", "8"), ("threshold", "10")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "the local rotation set at the added point is reduced to ∞" },
            },
            {
                let iso = iso.clone();
                move || {
                    let est = local_rotation_set_estimate(&iso, Vec2::ZERO, &EstimateParams::new(0.05, 3, 8, 10.0))?;
                    Ok(Value::Bool(est.hi_diverges && !est.lo_diverges))
                }
            },
        ),
    ];
    Ok(Scenario {
        name: "ex3_annulus_escape",
        kind: ScenarioKind::AnnulusMap,
        summary: "The lift (x − 1/y, y) on the annulus; the upper end, compactified to a point, escapes to +∞.",
        definition: definition(&[
            ("lift", "g(θ, y) = (θ − 1/y, y) on y < 0"),
            ("plane_model", "z = −y·e^(2πiθ); the added point is z = 0 and f_t(z) = z·e^(2πit/|z|)"),
            ("orientation", "cover θ increases counterclockwise, so the escape is to +∞"),
        ]),
        points: vec![plane_point("star", Vec2::ZERO)],
        claims,
        system: System { isotopy: Some(iso), region: Some(Rect::new(-0.1, 0.1, -0.1, 0.1)), ..System::default() },
    })
}

/// Depth of the dip in the pinned `φ` for the 3-shear sphere.
pub const EX4_DIP: f64 = 0.1;

/// `φ(y) = y − ε·sin⁴(3π(y − 1/6)/2)` on `(1/6, 5/6)`, `y` elsewhere.
///
/// `|d/dy sin⁴| ≤ 6π·(3√3/16) < 6.2`, so `φ′ > 0` for `ε = 0.1`.
pub fn ex4_phi(y: f64) -> f64 {
    if y <= 1.0 / 6.0 || y >= 5.0 / 6.0 {
        return y;
    }
    y - EX4_DIP * (1.5 * PI * (y - 1.0 / 6.0)).sin().powi(4)
}

pub fn ex4_phi_derivative(y: f64) -> f64 {
    if y <= 1.0 / 6.0 || y >= 5.0 / 6.0 {
        return 1.0;
    }
    let (s, c) = (1.5 * PI * (y - 1.0 / 6.0)).sin_cos();
    1.0 - EX4_DIP * 4.0 * s.powi(3) * c * 1.5 * PI
}

/// Checks the defining constraints of [`ex4_phi`] at `n` points.
pub fn ex4_phi_constraints_hold(n: usize) -> bool {
    (0..=n).all(|k| {
        let y = k as f64 / n as f64;
        let ends = y <= 1.0 / 6.0 || y >= 5.0 / 6.0;
        let shape = if ends { ex4_phi(y) == y } else { ex4_phi(y) < y };
        shape && ex4_phi_derivative(y) > 0.0
    })
}

/// Checks the constraints of the pinned `φ` of the sin² example at `n`
/// points: zeros, bound `1/2π`, sign pattern, zero mean, and
/// `|φ(s)| < s·sin²(π/s)` on `(3/4, 1)`.
pub fn ex5_phi_constraints_hold(n: usize) -> bool {
    let phi = Phi::get();
    let zeros = [0.0, 0.75, 1.0].iter().all(|&s| phi.value(s).abs() < 1e-15);
    let mean = phi.integral(1.0).abs() < 1e-8;
    let pointwise = (1..n).all(|k| {
        let s = k as f64 / n as f64;
        let v = phi.value(s);
        let bounded = v.abs() <= 1.0 / TAU;
        let sign = if s < 0.75 {
            v > 0.0
        } else if s > 0.75 {
            v < 0.0 && v.abs() < s * (PI / s).sin().powi(2)
        } else {
            true
        };
        bounded && sign
    });
    zeros && mean && pointwise
}

fn sum_rule_claims(f: &CylinderIsotopy, south: f64, north: f64, statement: &'static str, sum_basis: Basis) -> Vec<Claim> {
    let arguments: &'static [(&'static str, &'static str)] = &[("boundary", "y = 0"), ("iterates", "1000"), ("chart_sign", "-1")];
    let north_args: &'static [(&'static str, &'static str)] =
        &[("boundary", "y = 1"), ("iterates", "1000"), ("chart_sign", "+1")];
    let both: &'static [(&'static str, &'static str)] = &[("boundaries", "y = 0, y = 1"), ("iterates", "1000")];
    vec![
        claim(
            ClaimSpec {
                id: "rho_south",
                description: "rotation number at S",
                operation: "circle_rotation_number",
                arguments,
                expected: Value::Real(south),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "closed form: the bottom circle is translated rigidly" },
            },
            {
                let f = f.clone();
                move || Ok(Value::Real(boundary_rotation(&f, 0.0, -1.0)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "rho_north",
                description: "rotation number at N",
                operation: "circle_rotation_number",
                arguments: north_args,
                expected: Value::Real(north),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "closed form: the top circle is translated rigidly" },
            },
            {
                let f = f.clone();
                move || Ok(Value::Real(boundary_rotation(&f, 1.0, 1.0)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "rho_sum",
                description: statement,
                operation: "circle_rotation_number",
                arguments: both,
                expected: Value::Real(south + north),
                tolerance: 0.0,
                basis: sum_basis,
            },
            {
                let f = f.clone();
                move || Ok(Value::Real(boundary_rotation(&f, 0.0, -1.0)? + boundary_rotation(&f, 1.0, 1.0)?))
            },
        ),
    ]
}

pub(super) fn ex4_sphere_3shear() -> Result<Scenario> {
    let f: CylinderIsotopy = Arc::new(|t, z| Vec2::new(z.x + 3.0 * t * z.y, (1.0 - t) * z.y + t * ex4_phi(z.y)));
    let mut claims = sum_rule_claims(
        &f,
        0.0,
        3.0,
        "sum of the rotation numbers at S and N",
        Basis::Stated { statement: "the rotation numbers at the two fixed points sum to 3" },
    );
    claims.push(claim(
        ClaimSpec {
            id: "phi_constraints",
            description: "φ = id near the ends, φ < id in between, φ′ > 0",
            operation: "fixture_check",
            arguments: &[("samples", "10000")],
            expected: Value::Bool(true),
            tolerance: 0.0,
            basis: Basis::Definition,
        },
        || Ok(Value::Bool(ex4_phi_constraints_hold(10_000))),
    ));
    let south = cylinder_to_south("(x + 3ty, (1−t)y + tφ(y))", f.clone())?;
    let north = cylinder_to_north("(x + 3ty, (1−t)y + tφ(y))", f.clone())?;
    let cyl = PlanarIsotopy::new(
        Provenance::UserExpression("(x + 3ty, (1−t)y + tφ(y)) on the cylinder".into()),
        None,
        move |t, z| Ok(f(t, z)),
    )?;
    Ok(Scenario {
        name: "ex4_sphere_3shear",
        kind: ScenarioKind::SphereShear,
        summary: "A 3-shear with a vertical dip; the two collapsed ends rotate by 0 and 3.",
        definition: definition(&[
            ("map", "g(x, y) = (x + 3y, φ(y)) on ℝ × [0, 1]"),
            ("phi", "φ(y) = y − 0.1·sin⁴(3π(y − 1/6)/2) on (1/6, 5/6), y elsewhere"),
            ("isotopy", "f_t(x, y) = (x + 3ty, (1 − t)y + tφ(y))"),
        ]),
        points: vec![sphere_point("S", SOUTH_CHART, south), sphere_point("N", NORTH_CHART, north)],
        claims,
        system: System { isotopy: Some(cyl), region: Some(Rect::new(0.0, 1.0, 0.0, 1.0)), ..System::default() },
    })
}

/// Annulus region of the sin² generating function, for searches and checks.
pub const EX5_REGION: Rect = Rect::new(-0.6, 0.6, 0.05, 0.95);

/// The gradient of `g` seen from the top end, in the chart `w = (1−y)e^{2πix}`.
fn ex5_north_foliation() -> Foliation {
    Foliation::new("∇g in the chart w = (1−y)·e^(2πix)", |w: Vec2| {
        let r = w.norm();
        if r == 0.0 || r >= 1.0 {
            return Ok(Vec2::ZERO);
        }
        let e_r = w.scale(1.0 / r);
        let e_phi = e_r.perp();
        let grad = Sin2Field.gradient(Vec2::new(w.angle() / TAU, 1.0 - r))?;
        Ok(e_phi.scale(TAU * r * grad.x) - e_r.scale(grad.y))
    })
    .with_singularities(vec![Vec2::ZERO])
}

pub(super) fn ex5_sin2_genfunc() -> Result<Scenario> {
    let field: Arc<dyn ScalarField> = Arc::new(Sin2Field);
    let gen = GenIsotopy::new(field.clone(), 0.5, Rect::new(-1.0, 1.0, -0.5, 1.5))?;
    let iso = PlanarIsotopy::from_genfunc(&gen);
    let alternate = PlanarIsotopy::from_genfunc_alternate(&gen);
    let grad = gradient_foliation(field);
    let north = ex5_north_foliation();
    let targets = [Vec2::new(0.0, 0.5), Vec2::new(0.0, 1.0 / 3.0), Vec2::new(0.0, 0.25)];
    let half = Vec2::new(0.0, 0.5);

    let claims = vec![
        claim(
            ClaimSpec {
                id: "critical_points",
                description: "(0, 1/2), (0, 1/3), (0, 1/4) are critical points of g",
                operation: "find_critical_points",
                arguments: &[("region", "[-0.6,0.6]x[0.05,0.95]"), ("grid", "400"), ("tolerance", "1e-6")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "the critical set is {(n, 1/m)} together with the two flat ends" },
            },
            {
                let gen = gen.clone();
                move || {
                    let found = gen.find_critical_points(EX5_REGION, 400)?;
                    Ok(Value::Bool(targets.iter().all(|t| found.iter().any(|c| (c.location - *t).norm() <= 1e-6))))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "saddles",
                description: "singularity types of ∇g at (0, 1/2), (0, 1/3), (0, 1/4)",
                operation: "classify_singularity",
                arguments: &[("radius", "0.02"), ("samples", "256")],
                expected: Value::label("Saddle,Saddle,Saddle"),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "the fixed points other than S and N are saddles" },
            },
            {
                let grad = grad.clone();
                move || {
                    let classes = targets
                        .iter()
                        .map(|&z| Ok(format!("{:?}", classify_singularity(&grad, z, 0.02, 256)?.class)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Value::Label(classes.join(",")))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "north_sink",
                description: "N is a sink of the gradient foliation",
                operation: "classify_singularity",
                arguments: &[("center", "N"), ("radius", "0.1"), ("samples", "256")],
                expected: label(SingularityClass::Sink),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "N is a sink of the foliation" },
            },
            {
                let north = north.clone();
                move || Ok(label(classify_singularity(&north, Vec2::ZERO, 0.1, 256)?.class))
            },
        ),
        claim(
            ClaimSpec {
                id: "lefschetz_half",
                description: "i(f, (0, 1/2))",
                operation: "lefschetz_index",
                arguments: &[("center", "0,0.5"), ("radius", "0.02"), ("samples", "128")],
                expected: Value::Int(0),
                tolerance: 0.0,
                basis: Basis::Derived {
                    oracle: "f(z) − z = (∂₂g, −∂₁g) at (X, y) and ∂₂g ≥ 0 near (0, 1/2), so the displacement never points left",
                },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Int(lefschetz_index(|z| iso.time_one(z), half, 0.02, 128)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "foliation_isotopy_relation",
                description: "i(F, (0, 1/2)) = i(I, (0, 1/2)) + 1",
                operation: "isotopy_index",
                arguments: &[("center", "0,0.5"), ("radius", "0.02"), ("samples", "32")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "index identity for a transverse foliation" },
            },
            {
                let (iso, grad) = (iso.clone(), grad.clone());
                move || {
                    let fi = classify_singularity(&grad, half, 0.02, 256)?.foliation_index;
                    Ok(Value::Bool(fi == isotopy_index(&iso, half, 0.02, 32)? + 1))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "phi_constraints",
                description: "the pinned φ meets its defining constraints",
                operation: "fixture_check",
                arguments: &[("samples", "10000")],
                expected: Value::Bool(true),
                tolerance: 0.0,
                basis: Basis::Definition,
            },
            || Ok(Value::Bool(ex5_phi_constraints_hold(10_000))),
        ),
    ];
    let phi_text = format!(
        "φ(s) = {}·sin³(πs)·cos(πs − π/4)·({} + (1 + cos 2π(s − 0.9))⁴)",
        super::ex5::PHI_SCALE,
        super::ex5::PHI_MEAN_SHIFT
    );
    Ok(Scenario {
        name: "ex5_sin2_genfunc",
        kind: ScenarioKind::GenFunc,
        summary: "A generating function on the sphere whose critical set accumulates on the bottom end.",
        definition: definition(&[
            ("g", "∫₀^y s·sin²(π/s) + φ(s)·sin²(πx) ds on 0 < y < 1; constant below and above"),
            ("phi", &phi_text),
            ("twist_bound", "0.5"),
        ]),
        points: vec![
            plane_point("half", half),
            plane_point("third", Vec2::new(0.0, 1.0 / 3.0)),
            plane_point("quarter", Vec2::new(0.0, 0.25)),
            NamedPoint { name: "N", location: Vec2::ZERO, chart: Some(NORTH_CHART), isotopy: None, foliation: Some(north) },
        ],
        claims,
        system: System {
            genfunc: Some(gen),
            isotopy: Some(iso),
            alternate: Some(alternate),
            foliation: Some(grad),
            region: Some(EX5_REGION),
            ..System::default()
        },
    })
}

/// Horizontal displacement of the three-band map at height `y`.
pub fn ex6_shift(y: f64) -> f64 {
    if y <= 1.0 / 3.0 {
        0.0
    } else if y <= 2.0 / 3.0 {
        3.0 * y - 1.0
    } else {
        1.0
    }
}

/// The middle band continued linearly, `(x + 3y − 1, y)`, on `|y − 1/3| ≤ a`
/// in the shifted coordinate `y′ = y − 1/3`.
fn ex6_band() -> Result<AnnulusLiftMap> {
    AnnulusLiftMap::new(0.25, 0.25, |z| Ok(Vec2::new(z.x + 3.0 * z.y, z.y)))
}

fn twist_claim(
    id: &'static str,
    description: &'static str,
    arguments: &'static [(&'static str, &'static str)],
    oracle: &'static str,
    band: AnnulusLiftMap,
) -> Claim {
    claim(
        ClaimSpec {
            id,
            description,
            operation: "twist_check_and_search",
            arguments,
            expected: Value::Bool(true),
            tolerance: 0.0,
            basis: Basis::Derived { oracle },
        },
        move || {
            let report = twist_check_and_search(&band, 32)?;
            let on_line = report.fixed_points.iter().all(|p| p.y.abs() <= 1e-9);
            let small = report.residuals.iter().all(|&r| r <= 1e-9);
            Ok(Value::Bool(report.twist_holds && !report.fixed_points.is_empty() && on_line && small))
        },
    )
}

pub(super) fn ex6_threeband_shear() -> Result<Scenario> {
    let f: CylinderIsotopy = Arc::new(|t, z| Vec2::new(z.x + t * ex6_shift(z.y), z.y));
    let mut claims = sum_rule_claims(
        &f,
        0.0,
        1.0,
        "sum of the rotation numbers at a point of S and a point of N",
        Basis::Stated { statement: "a point of S and a point of N have rotation numbers summing to 1" },
    );
    claims.push(twist_claim(
        "middle_band_twist",
        "the middle band, continued linearly around y = 1/3, twists and fixes exactly y = 1/3",
        &[("band", "y - 1/3 in [-0.25, 0.25]"), ("grid", "32")],
        "solve 3y − 1 = 0, so y = 1/3",
        ex6_band()?,
    ));
    let south = cylinder_to_south("(x + t·s(y), y)", f.clone())?;
    let north = cylinder_to_north("(x + t·s(y), y)", f.clone())?;
    let cyl =
        PlanarIsotopy::new(Provenance::UserExpression("(x + t·s(y), y) on the cylinder".into()), None, move |t, z| Ok(f(t, z)))?;
    Ok(Scenario {
        name: "ex6_threeband_shear",
        kind: ScenarioKind::SphereShear,
        summary: "Identity on the bottom third, a shear in the middle, a full turn on the top third.",
        definition: definition(&[
            ("map", "(x, y) on y ≤ 1/3; (x + 3y − 1, y) on 1/3 < y ≤ 2/3; (x + 1, y) above"),
            ("isotopy", "f_t(x, y) = (x + t·s(y), y) with s the horizontal shift above"),
            ("twist_band", "(x + 3y′, y′) with y′ = y − 1/3, |y′| ≤ 0.25"),
        ]),
        points: vec![sphere_point("S", SOUTH_CHART, south), sphere_point("N", NORTH_CHART, north)],
        claims,
        system: System {
            isotopy: Some(cyl),
            annulus: Some(ex6_band()?),
            region: Some(Rect::new(0.0, 1.0, 0.0, 1.0)),
            ..System::default()
        },
    })
}

pub(super) fn ex7_linear_shear() -> Result<Scenario> {
    let f: CylinderIsotopy = Arc::new(|t, z| Vec2::new(z.x + t * z.y, z.y));
    let mut claims = sum_rule_claims(
        &f,
        0.0,
        1.0,
        "sum of the rotation numbers at S and N",
        Basis::Stated { statement: "the rotation numbers at both fixed points sum to 1" },
    );
    let south = cylinder_to_south("(x + ty, y)", f.clone())?;
    let north = cylinder_to_north("(x + ty, y)", f.clone())?;
    for (id, description, iso, expected) in [
        ("blowup_south", "blow-up rotation number at S from the chart derivative", south.clone(), 0.0),
        ("blowup_north", "blow-up rotation number at N from the chart derivative", north.clone(), 1.0),
    ] {
        claims.push(claim(
            ClaimSpec {
                id,
                description,
                operation: "isotopy_blowup_rotation",
                arguments: &[("center", "0,0"), ("jacobian", "central differences")],
                expected: Value::Real(expected),
                tolerance: 1e-5,
                basis: Basis::Derived { oracle: "Df_t(0) is the rotation by the boundary translation t·τ" },
            },
            move || Ok(Value::Real(isotopy_blowup_rotation(|t| iso.jacobian(t, Vec2::ZERO))?)),
        ));
    }
    for (id, description, iso, expected) in [
        ("estimate_south", "largest distance of the estimated rotation set at S from 0", south.clone(), 0.0),
        ("estimate_north", "largest distance of the estimated rotation set at N from 1", north.clone(), 1.0),
    ] {
        claims.push(claim(
            ClaimSpec {
                id,
                description,
                operation: "local_rotation_set_estimate",
                arguments: &[("r0", "1e-9"), ("levels", "2"), ("n_max", "8"), ("threshold", "10")],
                expected: Value::Real(0.0),
                tolerance: 1e-9,
                basis: Basis::Derived { oracle: "ρ_n(z) = τ(y) with y within r0 of the end" },
            },
            move || {
                let est = local_rotation_set_estimate(&iso, Vec2::ZERO, &EstimateParams::new(1e-9, 2, 8, 10.0))?;
                Ok(Value::Real((est.lo - expected).abs().max((est.hi - expected).abs())))
            },
        ));
    }
    let band = AnnulusLiftMap::new(1.0, 1.0, |z| Ok(Vec2::new(z.x + z.y, z.y)))?;
    claims.push(twist_claim(
        "shear_twist",
        "(x + y, y) on |y| ≤ 1 twists and fixes exactly y = 0",
        &[("a", "1"), ("grid", "32")],
        "p₁f̃(x, y) − x = y",
        band.clone(),
    ));
    let shear =
        PlanarIsotopy::new(Provenance::UserExpression("(x + ty, y)".into()), None, |t, z| Ok(Vec2::new(z.x + t * z.y, z.y)))?;
    let (z0, z1) = (Vec2::ZERO, Vec2::new(0.5, 0.0));
    for (id, description, turns, expected, oracle) in [
        ("linking_shear", "L(I, (0,0), (0.5,0)) for the plane shear", 0i64, 0i64, "both points stay fixed for all t"),
        ("linking_turned", "L(J∘I, (0,0), (0.5,0)) for the shear composed with a full turn", 1, 1, "L(J∘I) = L(I) + 1"),
    ] {
        let iso = shear.compose_turns(z0, turns);
        claims.push(claim(
            ClaimSpec {
                id,
                description,
                operation: "linking_number",
                arguments: &[("z0", "0,0"), ("z1", "0.5,0"), ("t_samples", "64")],
                expected: Value::Int(expected),
                tolerance: 0.0,
                basis: Basis::Derived { oracle },
            },
            move || Ok(Value::Int(linking_number(&iso, z0, z1, 64)?)),
        ));
    }
    let cyl =
        PlanarIsotopy::new(Provenance::UserExpression("(x + ty, y) on the cylinder".into()), None, move |t, z| Ok(f(t, z)))?;
    Ok(Scenario {
        name: "ex7_linear_shear",
        kind: ScenarioKind::SphereShear,
        summary: "The linear shear of the cylinder; the two poles rotate by 0 and 1.",
        definition: definition(&[("map", "g(x, y) = (x + y, y) on ℝ × [0, 1]"), ("isotopy", "f_t(x, y) = (x + ty, y)")]),
        points: vec![sphere_point("S", SOUTH_CHART, south), sphere_point("N", NORTH_CHART, north)],
        claims,
        system: System {
            isotopy: Some(cyl),
            annulus: Some(band),
            region: Some(Rect::new(0.0, 1.0, 0.0, 1.0)),
            ..System::default()
        },
    })
}

pub(super) fn app_a_quadratic() -> Result<Scenario> {
    let g: Arc<dyn ScalarField> = Arc::new(parse_expr("x^2 + y^2")?);
    let region = Rect::new(-2.0, 2.0, -2.0, 2.0);
    let gen = GenIsotopy::new(g.clone(), 0.5, region)?;
    let iso = PlanarIsotopy::from_genfunc(&gen);
    let alternate = PlanarIsotopy::from_genfunc_alternate(&gen);
    let grad = gradient_foliation(g);
    let probes: Vec<(f64, Vec2)> = (0..20)
        .map(|k| {
            let t = (k as f64 + 0.5) / 20.0;
            (t, Vec2::polar(2.399963 * k as f64).scale(0.2 + 1.5 * t))
        })
        .collect();
    let starts = circle_points(Vec2::ZERO, 0.5, 16);

    let claims = vec![
        claim(
            ClaimSpec {
                id: "area_preserving",
                description: "largest |det Df_t − 1| over 20 probes",
                operation: "gf_jacobian",
                arguments: &[("probes", "20 points, t in (0, 1)")],
                expected: Value::Real(0.0),
                tolerance: 1e-9,
                basis: Basis::Stated { statement: "det J_f = 1" },
            },
            {
                let gen = gen.clone();
                move || {
                    let worst = probes
                        .iter()
                        .map(|&(t, z)| Ok((gen.gf_jacobian(t, z)?.det() - 1.0).abs()))
                        .collect::<Result<Vec<f64>>>()?
                        .into_iter()
                        .fold(0.0, f64::max);
                    Ok(Value::Real(worst))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "index_relation",
                description: "i(F, 0), i(I, 0), i(f, 0) as a triple",
                operation: "index_relation_check",
                arguments: &[("center", "0,0"), ("radius", "0.5"), ("samples", "64")],
                expected: Value::label("1,0,1"),
                tolerance: 0.0,
                basis: Basis::Derived { oracle: "sign det(Df − I) and the index identity i(F) = i(I) + 1" },
            },
            {
                let (iso, grad) = (iso.clone(), grad.clone());
                move || {
                    let r = crate::indices::index_relation_check(&iso, &grad, Vec2::ZERO, 0.5, 64)?;
                    Ok(Value::Label(format!("{},{},{}", r.foliation, r.isotopy, r.lefschetz)))
                }
            },
        ),
        claim(
            ClaimSpec {
                id: "alternate_transverse",
                description: "the two-phase isotopy crosses the gradient leaves from left to right",
                operation: "transversality_report",
                arguments: &[("starts", "16 points on |z| = 0.5"), ("t_samples", "64")],
                expected: label(Verdict::PositivelyTransverse),
                tolerance: 0.0,
                basis: Basis::Stated { statement: "the gradient foliation is transverse to the isotopy" },
            },
            {
                let (alternate, grad) = (alternate.clone(), grad.clone());
                move || Ok(label(worst_verdict(&alternate, &grad, &starts)?))
            },
        ),
        claim(
            ClaimSpec {
                id: "torsion_low",
                description: "torsion-low classification at 0",
                operation: "torsion_low_classify",
                arguments: &[("center", "0,0")],
                expected: Value::label("TorsionLow"),
                tolerance: 0.0,
                basis: Basis::Derived {
                    oracle: "Df₁(0) = [[1, 2], [−2, −3]] has the double eigenvalue −1, so |ρ| = 1/2 < 1"
                },
            },
            {
                let iso = iso.clone();
                move || Ok(label(torsion_low_classify(|t| iso.jacobian(t, Vec2::ZERO))?.classification))
            },
        ),
        claim(
            ClaimSpec {
                id: "blowup_rotation",
                description: "ρ(I, 0)",
                operation: "isotopy_blowup_rotation",
                arguments: &[("center", "0,0")],
                expected: Value::Real(-0.5),
                tolerance: 1e-9,
                basis: Basis::Derived {
                    oracle: "Df_t(0)e₁ = (1, −2t) turns clockwise and Df₁(0) has eigenvalue −1, so half a turn backwards",
                },
            },
            {
                let iso = iso.clone();
                move || Ok(Value::Real(isotopy_blowup_rotation(|t| iso.jacobian(t, Vec2::ZERO))?))
            },
        ),
    ];
    Ok(Scenario {
        name: "appA_quadratic",
        kind: ScenarioKind::GenFunc,
        summary: "The isotopy generated by x² + y².",
        definition: definition(&[("g", "x^2 + y^2"), ("twist_bound", "0.5"), ("region", "[-2,2]x[-2,2]")]),
        points: vec![NamedPoint { foliation: Some(grad.clone()), ..plane_point("origin", Vec2::ZERO) }],
        claims,
        system: System {
            genfunc: Some(gen),
            isotopy: Some(iso),
            alternate: Some(alternate),
            foliation: Some(grad),
            region: Some(region),
            ..System::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ex2_flow_matches_its_field() {
        for &z in &[Vec2::new(0.3, 0.4), Vec2::new(-0.2, 0.7), Vec2::new(-0.5, -0.1), Vec2::new(0.6, -0.6)] {
            let h = 1e-6;
            let v = (ex2_flow(h, z) - ex2_flow(-h, z)).scale(0.5 / h);
            assert!((v - ex2_field(z)).norm() < 1e-8, "{z}");
            assert!(ex2_field(z).cross(ex2_xi(z)) > 0.0);
        }
    }

    #[test]
    fn flow_is_a_group() {
        let z = Vec2::new(0.4, 0.9);
        let twice = ex2_flow(0.3, ex2_flow(0.3, z));
        assert!((twice - ex2_flow(0.6, z)).norm() < 1e-14);
    }

    #[test]
    fn ex4_phi_is_pinned() {
        assert!(ex4_phi_constraints_hold(10_000));
        assert!(ex4_phi(0.5) < 0.5);
    }

    #[test]
    fn ex6_shift_is_continuous() {
        assert_eq!(ex6_shift(1.0 / 3.0), 0.0);
        assert!((ex6_shift(2.0 / 3.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn charts_fix_the_poles() {
        let f: CylinderIsotopy = Arc::new(|t, z| Vec2::new(z.x + t * z.y, z.y));
        let s = cylinder_to_south("shear", f.clone()).unwrap();
        let n = cylinder_to_north("shear", f).unwrap();
        s.check_fixes(Vec2::ZERO).unwrap();
        n.check_fixes(Vec2::ZERO).unwrap();
        // Near N the shear is nearly a full turn.
        let w = Vec2::new(0.01, 0.0);
        assert!((n.time_one(w).unwrap() - w.rotate(TAU * 0.99)).norm() < 1e-15);
    }
}
