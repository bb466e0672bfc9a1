use crate::linalg::Vec2;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. The variant name is part of the
/// CLI's JSON error payload (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("`{expr}` is undefined at ({x}, {y})")]
    Domain { expr: String, x: f64, y: f64 },

    #[error("zero vector at sample {0}")]
    ZeroVector(usize),
    #[error("angle refinement exhausted between samples {0} and {1}")]
    RefinementExhausted(usize, usize),
    #[error("winding number requires a closed path")]
    NotClosed,
    #[error("winding is not close to an integer (residue {0})")]
    NonIntegralWinding(f64),
    #[error("map is not a lift of a circle map: F(x+1) - F(x) - 1 = {defect} at x = {x}")]
    NotALift { x: f64, defect: f64 },
    #[error("the origin has no preimage in the annular cover")]
    OriginNotInCover,

    #[error("generating-function solver diverged after {iterations} iterations (residual {residual})")]
    SolverDiverged { iterations: usize, residual: f64 },
    #[error("mixed second derivative {value} exceeds the twist bound {bound} at {at}")]
    TwistBoundViolated { at: Vec2, value: f64, bound: f64 },

    #[error("leaf integration starts at a singular point {0}")]
    StartsSingular(Vec2),
    #[error("every path segment is stationary")]
    AllStationary,
    #[error("direction field vanishes on the circle at sample {0}")]
    SingularOnCircle(usize),

    #[error("fixed point on the curve at sample {0}")]
    FixedPointOnCurve(usize),
    #[error("center {center} is moved by the isotopy (displacement {displacement} at t = {t})")]
    CenterNotFixed { center: Vec2, t: f64, displacement: f64 },
    #[error("trajectories collide at t = {0}")]
    TrajectoryCollision(f64),
    #[error("{which} = {at} is not fixed by the time-one map")]
    NotFixed { which: &'static str, at: Vec2 },

    #[error("matrix is not orientation preserving (det = {0})")]
    NotOrientationPreserving(f64),
    #[error("no orbit satisfied the window conditions ({0})")]
    NoSamples(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::Domain { .. } => "DomainError",
            Error::ZeroVector(_) => "ZeroVector",
            Error::RefinementExhausted(..) => "RefinementExhausted",
            Error::NotClosed => "NotClosed",
            Error::NonIntegralWinding(_) => "NonIntegralWinding",
            Error::NotALift { .. } => "NotALift",
            Error::OriginNotInCover => "OriginNotInCover",
            Error::SolverDiverged { .. } => "SolverDiverged",
            Error::TwistBoundViolated { .. } => "TwistBoundViolated",
            Error::StartsSingular(_) => "StartsSingular",
            Error::AllStationary => "AllStationary",
            Error::SingularOnCircle(_) => "SingularOnCircle",
            Error::FixedPointOnCurve(_) => "FixedPointOnCurve",
            Error::CenterNotFixed { .. } => "CenterNotFixed",
            Error::TrajectoryCollision(_) => "TrajectoryCollision",
            Error::NotFixed { .. } => "NotFixed",
            Error::NotOrientationPreserving(_) => "NotOrientationPreserving",
            Error::NoSamples(_) => "NoSamples",
            Error::UnknownFixture(_) => "UnknownFixture",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
