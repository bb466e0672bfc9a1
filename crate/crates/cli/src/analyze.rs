//! `analyze`: one library operation against a scenario.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use torsionlab::foliate::{classify_singularity, sample_path, transversality_report, Foliation};
use torsionlab::genfunc::find_critical_points;
use torsionlab::indices::{index_relation_check, isotopy_index, lefschetz_index, linking_number, PlanarIsotopy};
use torsionlab::rotation::{
    isotopy_blowup_rotation, local_rotation_set_estimate, torsion_low_classify, twist_check_and_search, EstimateParams,
};
use torsionlab::{Rect, Vec2};

use crate::params::Params;
use crate::scenario::{InputError, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Lefschetz,
    IsotopyIndex,
    FoliationIndex,
    IndexRelation,
    Linking,
    RotationSet,
    BlowupRotation,
    TorsionLow,
    Twist,
    CriticalPoints,
    Transversality,
}

impl Op {
    pub fn key(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_owned()
    }
}

/// Either bad input (exit 2) or a failed computation (exit 1).
pub enum Failure {
    Input(InputError),
    Operation(torsionlab::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<torsionlab::Error> for Failure {
    fn from(e: torsionlab::Error) -> Self {
        Failure::Operation(e)
    }
}

fn json_of<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn missing(what: &str, op: Op) -> Failure {
    Failure::Input(InputError::new("MissingInput", format!("`{}` needs {what}", op.key())))
}

struct Ctx<'a> {
    target: &'a Target,
    params: &'a Params,
    op: Op,
}

impl Ctx<'_> {
    fn point(&self, spec: Option<&String>, flag: &str) -> Result<torsionlab::fixtures::NamedPoint, Failure> {
        let spec = spec.ok_or_else(|| missing(&format!("--{flag}"), self.op))?;
        Ok(self.target.resolve(spec)?)
    }

    /// The point's own isotopy when it lives in a chart, else the scenario's.
    fn isotopy(&self, own: Option<&PlanarIsotopy>) -> Result<PlanarIsotopy, Failure> {
        let sys = &self.target.system;
        let iso = if self.params.alternate {
            sys.alternate.as_ref().ok_or_else(|| missing("a generating function for --alternate", self.op))?
        } else {
            own.or(sys.isotopy.as_ref()).ok_or_else(|| missing("an isotopy", self.op))?
        };
        Ok(iso.clone())
    }

    fn foliation(&self, own: Option<&Foliation>) -> Result<Foliation, Failure> {
        own.or(self.target.system.foliation.as_ref()).cloned().ok_or_else(|| missing("a foliation", self.op))
    }

    fn region(&self) -> Result<Rect, Failure> {
        if let Some(text) = &self.params.region {
            let v: Vec<f64> = text.split(',').filter_map(|s| s.trim().parse().ok()).collect();
            let r = (v.len() == 4).then(|| Rect::new(v[0], v[1], v[2], v[3]));
            return r.filter(Rect::is_valid).ok_or_else(|| {
                Failure::Input(InputError::new("BadFlag", format!("--region `{text}` is not x_min,x_max,y_min,y_max")))
            });
        }
        self.target.system.region.ok_or_else(|| missing("--region", self.op))
    }
}

pub fn run(target: &Target, op: Op, params: &Params) -> Result<Value, Failure> {
    let cx = Ctx { target, params, op };
    let p = params;
    let radius = p.radius.unwrap_or(0.1);
    let result = match op {
        Op::Lefschetz => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = cx.isotopy(at.isotopy.as_ref())?;
            let index = lefschetz_index(|z| iso.time_one(z), at.location, radius, p.samples.unwrap_or(256))?;
            json!({ "index": index })
        }
        Op::IsotopyIndex => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = turned(cx.isotopy(at.isotopy.as_ref())?, at.location, p.turns);
            json!({ "index": isotopy_index(&iso, at.location, radius, p.samples.unwrap_or(64))? })
        }
        Op::FoliationIndex => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let f = cx.foliation(at.foliation.as_ref())?;
            json_of(&classify_singularity(&f, at.location, radius, p.samples.unwrap_or(256))?)
        }
        Op::IndexRelation => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = cx.isotopy(at.isotopy.as_ref())?;
            let f = cx.foliation(at.foliation.as_ref())?;
            json_of(&index_relation_check(&iso, &f, at.location, radius, p.samples.unwrap_or(256))?)
        }
        Op::Linking => {
            let z0 = cx.point(p.z0.as_ref(), "z0")?;
            let z1 = cx.point(p.z1.as_ref(), "z1")?;
            let iso = turned(cx.isotopy(None)?, z0.location, p.turns);
            json!({ "linking_number": linking_number(&iso, z0.location, z1.location, p.t_samples.unwrap_or(64))? })
        }
        Op::RotationSet => {
            let at = cx.point(p.at.as_ref(), "center")?;
            let iso = turned(cx.isotopy(at.isotopy.as_ref())?, at.location, p.turns);
            let mut est = EstimateParams::new(
                p.r0.unwrap_or(0.1),
                p.levels.unwrap_or(3),
                p.n_max.unwrap_or(8),
                p.threshold.unwrap_or(10.0),
            );
            if let Some(seeds) = p.seeds {
                est.seeds = seeds;
            }
            let r = local_rotation_set_estimate(&iso, at.location, &est)?;
            json!({ "parameters": est, "estimate": r, "diverges": r.lo_diverges || r.hi_diverges })
        }
        Op::BlowupRotation => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = turned(cx.isotopy(at.isotopy.as_ref())?, at.location, p.turns);
            iso.check_fixes(at.location)?;
            json!({ "rho": isotopy_blowup_rotation(|t| iso.jacobian(t, at.location))? })
        }
        Op::TorsionLow => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = turned(cx.isotopy(at.isotopy.as_ref())?, at.location, p.turns);
            iso.check_fixes(at.location)?;
            let v = torsion_low_classify(|t| iso.jacobian(t, at.location))?;
            json!({ "classification": v.classification, "rho": v.rho, "degenerate": v.degenerate, "case": v.case_tag })
        }
        Op::Twist => {
            let band = target.system.annulus.as_ref().ok_or_else(|| missing("an annulus band", op))?;
            json_of(&twist_check_and_search(band, p.grid.unwrap_or(64))?)
        }
        Op::CriticalPoints => {
            let gen = target.system.genfunc.as_ref().ok_or_else(|| missing("a generating function", op))?;
            let region = cx.region()?;
            let points = find_critical_points(gen.g().as_ref(), region, p.grid.unwrap_or(200))?;
            json!({ "region": region, "critical_points": points })
        }
        Op::Transversality => {
            let at = cx.point(p.at.as_ref(), "at")?;
            let iso = cx.isotopy(at.isotopy.as_ref())?;
            let f = cx.foliation(at.foliation.as_ref())?;
            let path = sample_path(|t| iso.eval(t, at.location), p.t_samples.unwrap_or(64))?;
            json_of(&transversality_report(&path, &f, 1e-12)?)
        }
    };
    Ok(result)
}

fn turned(iso: PlanarIsotopy, center: Vec2, turns: Option<i64>) -> PlanarIsotopy {
    match turns {
        Some(k) if k != 0 => iso.compose_turns(center, k),
        _ => iso,
    }
}
