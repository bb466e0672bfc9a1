//! The explicit systems, as named scenarios whose claims can be re-run.
//!
//! A [`Scenario`] bundles the constructed objects (isotopies, foliations,
//! annulus lifts, named points) with a list of [`Claim`]s. Each claim names
//! the library operation it exercises, echoes its arguments, and records
//! the expected value together with the [`Basis`] for expecting it.

mod catalog;
pub mod ex5;

use crate::error::{Error, Result};
use crate::foliate::Foliation;
use crate::genfunc::GenIsotopy;
use crate::indices::PlanarIsotopy;
use crate::linalg::{Rect, Vec2};
use crate::rotation::AnnulusLiftMap;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

pub use catalog::{
    cylinder_to_north, cylinder_to_south, ex2_field, ex2_flow, ex2_xi, ex4_phi, ex4_phi_constraints_hold, ex4_phi_derivative,
    ex5_phi_constraints_hold, ex6_shift, CylinderIsotopy, EX4_DIP, EX5_REGION,
};

/// Every fixture name, in catalog order.
pub const FIXTURE_NAMES: [&str; 8] = [
    "ex1_homothety",
    "ex2_piecewise_flow",
    "ex3_annulus_escape",
    "ex4_sphere_3shear",
    "ex5_sin2_genfunc",
    "ex6_threeband_shear",
    "ex7_linear_shear",
    "appA_quadratic",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScenarioKind {
    GenFunc,
    ExplicitIsotopy,
    AnnulusMap,
    SphereShear,
    PiecewiseFlow,
}

/// A computed or expected result.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Label(String),
}

impl Value {
    pub fn label(s: impl Into<String>) -> Value {
        Value::Label(s.into())
    }

    fn matches(&self, expected: &Value, tolerance: f64) -> bool {
        match (self, expected) {
            (Value::Real(a), Value::Real(b)) => (a - b).abs() <= tolerance,
            (Value::Int(a), Value::Real(b)) | (Value::Real(b), Value::Int(a)) => (*a as f64 - b).abs() <= tolerance,
            (a, b) => a == b,
        }
    }
}

/// Why a claim's expected value is expected.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "basis", rename_all = "snake_case")]
pub enum Basis {
    /// Asserted by the source discussion of the example.
    Stated { statement: &'static str },
    /// Computed independently of the operation under test.
    Derived { oracle: &'static str },
    /// Immediate from the definitions.
    Definition,
}

pub type ClaimFn = Arc<dyn Fn() -> Result<Value> + Send + Sync>;

#[derive(Clone, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub description: &'static str,
    pub operation: &'static str,
    pub arguments: BTreeMap<&'static str, String>,
    pub expected: Value,
    pub tolerance: f64,
    #[serde(flatten)]
    pub basis: Basis,
    #[serde(skip)]
    run: ClaimFn,
}

impl std::fmt::Debug for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Claim").field("id", &self.id).field("expected", &self.expected).finish()
    }
}

impl Claim {
    pub fn evaluate(&self) -> Result<Value> {
        (self.run)()
    }
}

/// A point of interest, possibly living in its own chart with its own
/// isotopy and foliation (the poles of the sphere models).
#[derive(Clone, Serialize)]
pub struct NamedPoint {
    pub name: &'static str,
    pub location: Vec2,
    /// Coordinates the location is expressed in, when not the plane itself.
    pub chart: Option<&'static str>,
    #[serde(skip)]
    pub isotopy: Option<PlanarIsotopy>,
    #[serde(skip)]
    pub foliation: Option<Foliation>,
}

impl std::fmt::Debug for NamedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NamedPoint").field("name", &self.name).field("location", &self.location).finish()
    }
}

/// The objects a scenario is built from.
#[derive(Clone, Default)]
pub struct System {
    pub genfunc: Option<GenIsotopy>,
    pub isotopy: Option<PlanarIsotopy>,
    pub alternate: Option<PlanarIsotopy>,
    pub foliation: Option<Foliation>,
    pub annulus: Option<AnnulusLiftMap>,
    /// Suggested search / plotting window.
    pub region: Option<Rect>,
}

#[derive(Clone, Serialize)]
pub struct Scenario {
    pub name: &'static str,
    pub kind: ScenarioKind,
    pub summary: &'static str,
    pub definition: BTreeMap<&'static str, String>,
    pub points: Vec<NamedPoint>,
    pub claims: Vec<Claim>,
    #[serde(skip)]
    pub system: System,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("name", &self.name).field("claims", &self.claims).finish()
    }
}

impl Scenario {
    pub fn point(&self, name: &str) -> Option<&NamedPoint> {
        self.points.iter().find(|p| p.name == name)
    }
}

pub fn load_fixture(name: &str) -> Result<Scenario> {
    match name {
        "ex1_homothety" => catalog::ex1_homothety(),
        "ex2_piecewise_flow" => catalog::ex2_piecewise_flow(),
        "ex3_annulus_escape" => catalog::ex3_annulus_escape(),
        "ex4_sphere_3shear" => catalog::ex4_sphere_3shear(),
        "ex5_sin2_genfunc" => catalog::ex5_sin2_genfunc(),
        "ex6_threeband_shear" => catalog::ex6_threeband_shear(),
        "ex7_linear_shear" => catalog::ex7_linear_shear(),
        "appA_quadratic" => catalog::app_a_quadratic(),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimError {
    pub name: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub operation: &'static str,
    pub arguments: BTreeMap<&'static str, String>,
    pub expected: Value,
    pub computed: Option<Value>,
    pub tolerance: f64,
    #[serde(flatten)]
    pub basis: Basis,
    pub error: Option<ClaimError>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureReport {
    pub fixture: &'static str,
    pub claims: Vec<ClaimOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

/// Runs every claim; failures and errors are recorded, never propagated.
pub fn run_fixture_claims(s: &Scenario) -> FixtureReport {
    let claims: Vec<ClaimOutcome> = s
        .claims
        .iter()
        .map(|c| {
            let (computed, error) = match c.evaluate() {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(ClaimError { name: e.name(), message: e.to_string() })),
            };
            let passed = computed.as_ref().is_some_and(|v| v.matches(&c.expected, c.tolerance));
            ClaimOutcome {
                id: c.id,
                description: c.description,
                operation: c.operation,
                arguments: c.arguments.clone(),
                expected: c.expected.clone(),
                computed,
                tolerance: c.tolerance,
                basis: c.basis.clone(),
                error,
                passed,
            }
        })
        .collect();
    let passed = claims.iter().filter(|c| c.passed).count();
    let failed = claims.len() - passed;
    FixtureReport { fixture: s.name, claims, passed, failed, all_passed: failed == 0 }
}
