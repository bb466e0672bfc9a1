//! Scenario files: schema, validation, and construction of the objects.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;
use torsionlab::expr::{parse_expr, Expr, ScalarField};
use torsionlab::fixtures::{load_fixture, NamedPoint, System};
use torsionlab::foliate::{expression_foliation, gradient_foliation};
use torsionlab::genfunc::GenIsotopy;
use torsionlab::indices::{PlanarIsotopy, Provenance};
use torsionlab::rotation::AnnulusLiftMap;
use torsionlab::{Error, Rect, Vec2};

use crate::params::Params;

pub const SCHEMA_VERSION: u32 = 1;
const FLOW_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FileKind {
    GenFunc,
    ExplicitIsotopy,
    AnnulusMap,
}

/// A pair of expressions, the two components of a map or a field.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub kind: FileKind,
    /// Generating function (GenFunc).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_bound: Option<f64>,
    /// Autonomous field whose flow is the isotopy (ExplicitIsotopy).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<Pair>,
    /// Flow time reached at t = 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    /// Lift in cover coordinates, x in turns (AnnulusMap).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<Band>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub foliation: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub points: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presets: BTreeMap<String, Params>,
}

/// A problem with the input, reported with exit code 2.
#[derive(Debug, Clone, Serialize)]
pub struct InputError {
    pub name: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl InputError {
    pub fn new(name: &'static str, message: impl Into<String>) -> Self {
        InputError { name, message: message.into(), line: None, column: None }
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError { name: "ScenarioParse", message: e.to_string(), line: Some(e.line()), column: Some(e.column()) }
    }
}

/// What an analysis or export runs against.
pub struct Target {
    /// Echo of the input: the file document or the fixture name.
    pub echo: serde_json::Value,
    pub system: System,
    pub points: Vec<NamedPoint>,
    pub presets: BTreeMap<String, Params>,
}

impl Target {
    pub fn from_fixture(name: &str) -> Result<Target, InputError> {
        let s = load_fixture(name).map_err(|e| InputError::new(e.name(), e.to_string()))?;
        Ok(Target { echo: serde_json::json!({ "fixture": name }), system: s.system, points: s.points, presets: BTreeMap::new() })
    }

    pub fn from_path(path: &str) -> Result<Target, InputError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| InputError::new("ScenarioRead", format!("cannot read {path}: {e}")))?;
        Target::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Target, InputError> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        build(&file).map(|(system, points)| Target {
            echo: serde_json::to_value(&file).expect("scenario serializes"),
            system,
            points,
            presets: file.presets.clone(),
        })
    }

    /// A named point, or literal coordinates `x,y`.
    pub fn resolve(&self, spec: &str) -> Result<NamedPoint, InputError> {
        if let Some(p) = self.points.iter().find(|p| p.name == spec) {
            return Ok(p.clone());
        }
        let coords: Vec<&str> = spec.split(',').collect();
        let parsed: Option<Vec<f64>> = (coords.len() == 2).then(|| coords.iter().filter_map(|c| c.trim().parse().ok()).collect());
        match parsed {
            Some(v) if v.len() == 2 => {
                Ok(NamedPoint { name: "literal", location: Vec2::new(v[0], v[1]), chart: None, isotopy: None, foliation: None })
            }
            _ => {
                let known: Vec<&str> = self.points.iter().map(|p| p.name).collect();
                Err(InputError::new(
                    "UnknownPoint",
                    format!("`{spec}` is neither `x,y` nor a named point (known: {})", known.join(", ")),
                ))
            }
        }
    }
}

fn expression(field: &str, text: &str) -> Result<Expr, InputError> {
    parse_expr(text).map_err(|e| InputError::new("ExpressionParse", format!("in `{field}`: {e}")))
}

fn require<'a, T>(value: &'a Option<T>, field: &str, kind: FileKind) -> Result<&'a T, InputError> {
    value.as_ref().ok_or_else(|| InputError::new("ScenarioSchema", format!("kind {kind:?} requires `{field}`")))
}

fn forbid<T>(value: &Option<T>, field: &str, kind: FileKind) -> Result<(), InputError> {
    match value {
        Some(_) => Err(InputError::new("ScenarioSchema", format!("`{field}` does not apply to kind {kind:?}"))),
        None => Ok(()),
    }
}

fn core_input(e: Error) -> InputError {
    InputError::new(e.name(), e.to_string())
}

fn build(file: &ScenarioFile) -> Result<(System, Vec<NamedPoint>), InputError> {
    if file.schema != SCHEMA_VERSION {
        return Err(InputError::new(
            "ScenarioSchema",
            format!("unsupported schema version {} (this build reads {SCHEMA_VERSION})", file.schema),
        ));
    }
    let kind = file.kind;
    let region = match file.region {
        Some([x0, x1, y0, y1]) => {
            let r = Rect::new(x0, x1, y0, y1);
            if !r.is_valid() {
                return Err(InputError::new("ScenarioSchema", "`region` must be [x_min, x_max, y_min, y_max] with min < max"));
            }
            r
        }
        None => Rect::new(-1.0, 1.0, -1.0, 1.0),
    };
    let mut system = System { region: Some(region), ..System::default() };
    match kind {
        FileKind::GenFunc => {
            forbid(&file.flow, "flow", kind)?;
            forbid(&file.time, "time", kind)?;
            forbid(&file.lift, "lift", kind)?;
            forbid(&file.band, "band", kind)?;
            let g: Arc<dyn ScalarField> = Arc::new(expression("g", require(&file.g, "g", kind)?)?);
            let gen = GenIsotopy::new(g.clone(), file.twist_bound.unwrap_or(0.5), region).map_err(core_input)?;
            system.isotopy = Some(PlanarIsotopy::from_genfunc(&gen));
            system.alternate = Some(PlanarIsotopy::from_genfunc_alternate(&gen));
            system.foliation = Some(gradient_foliation(g));
            system.genfunc = Some(gen);
        }
        FileKind::ExplicitIsotopy => {
            forbid(&file.g, "g", kind)?;
            forbid(&file.twist_bound, "twist_bound", kind)?;
            forbid(&file.lift, "lift", kind)?;
            forbid(&file.band, "band", kind)?;
            let flow = require(&file.flow, "flow", kind)?;
            let (vx, vy) = (expression("flow.x", &flow.x)?, expression("flow.y", &flow.y)?);
            let time = file.time.unwrap_or(1.0);
            if !time.is_finite() {
                return Err(InputError::new("ScenarioSchema", "`time` must be finite"));
            }
            let description = format!("flow of ({vx}, {vy}) for time {time}·t");
            let iso =
                PlanarIsotopy::new(Provenance::UserExpression(description), None, move |t, z| rk4_flow(&vx, &vy, z, t * time))
                    .map_err(core_input)?;
            system.isotopy = Some(iso);
        }
        FileKind::AnnulusMap => {
            forbid(&file.g, "g", kind)?;
            forbid(&file.twist_bound, "twist_bound", kind)?;
            forbid(&file.flow, "flow", kind)?;
            forbid(&file.time, "time", kind)?;
            let lift = require(&file.lift, "lift", kind)?;
            let (px, py) = (expression("lift.x", &lift.x)?, expression("lift.y", &lift.y)?);
            if let Some(band) = file.band {
                let (bx, by) = (px.clone(), py.clone());
                let map = AnnulusLiftMap::new(band.a, band.b, move |z| Ok(Vec2::new(bx.eval(z.x, z.y)?, by.eval(z.x, z.y)?)))
                    .map_err(core_input)?;
                system.annulus = Some(map);
            }
            let description = format!("straight-line lift isotopy to ({px}, {py}) on the cover");
            let iso = PlanarIsotopy::new(Provenance::UserExpression(description), Some(Vec2::ZERO), move |t, z| {
                cover_isotopy(&px, &py, t, z)
            })
            .map_err(core_input)?;
            system.isotopy = Some(iso);
        }
    }
    if let Some(f) = &file.foliation {
        system.foliation = Some(expression_foliation(expression("foliation.x", &f.x)?, expression("foliation.y", &f.y)?));
    }
    let mut points: Vec<NamedPoint> = Vec::new();
    if kind == FileKind::AnnulusMap {
        points.push(named("star", Vec2::ZERO));
    }
    for (name, [x, y]) in &file.points {
        points.retain(|p| p.name != name.as_str());
        points.push(named(leak(name), Vec2::new(*x, *y)));
    }
    Ok((system, points))
}

/// Point names live for the whole (short) process.
fn leak(s: &str) -> &'static str {
    Box::leak(s.to_owned().into_boxed_str())
}

fn named(name: &'static str, location: Vec2) -> NamedPoint {
    NamedPoint { name, location, chart: None, isotopy: None, foliation: None }
}

fn rk4_flow(vx: &Expr, vy: &Expr, z: Vec2, time: f64) -> torsionlab::Result<Vec2> {
    let field = |p: Vec2| -> torsionlab::Result<Vec2> { Ok(Vec2::new(vx.eval(p.x, p.y)?, vy.eval(p.x, p.y)?)) };
    let h = time / FLOW_STEPS as f64;
    let mut p = z;
    if time == 0.0 {
        return Ok(p);
    }
    for _ in 0..FLOW_STEPS {
        let k1 = field(p)?;
        let k2 = field(p + k1.scale(h / 2.0))?;
        let k3 = field(p + k2.scale(h / 2.0))?;
        let k4 = field(p + k3.scale(h))?;
        p += (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
    }
    Ok(p)
}

/// `(θ, y) ↦ (θ, y) + t·(P(θ, y) − θ, Q(θ, y) − y)` pushed through
/// `z = −y·e^{2πiθ}`; the upper end `y → 0⁻` is the origin.
fn cover_isotopy(px: &Expr, py: &Expr, t: f64, z: Vec2) -> torsionlab::Result<Vec2> {
    let r = z.norm();
    if r == 0.0 {
        return Ok(Vec2::ZERO);
    }
    let (theta, y) = (z.angle() / TAU, -r);
    let p = px.eval(theta, y)?;
    let q = py.eval(theta, y)?;
    let (theta_t, y_t) = (theta + t * (p - theta), y + t * (q - y));
    if !(y_t < 0.0) {
        return Err(Error::InvalidArgument(format!("lift leaves the cover y < 0 (y = {y_t})")));
    }
    Ok(Vec2::polar(TAU * theta_t).scale(-y_t))
}
