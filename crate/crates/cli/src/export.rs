//! `export`: leaves and orbits as CSV polylines.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use torsionlab::foliate::integrate_leaf;
use torsionlab::Vec2;

use crate::analyze::Failure;
use crate::scenario::{InputError, Target};

#[derive(Debug, Clone, clap::Args)]
pub struct LeafOptions {
    /// Circle the leaf seeds sit on: its center (`x,y` or a named point).
    #[arg(long, default_value = "0,0")]
    pub around: String,
    #[arg(long, default_value_t = 0.5)]
    pub seed_radius: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Arclength cap per leaf, in each direction of travel.
    #[arg(long, default_value_t = 2.0)]
    pub length: f64,
}

pub struct Table {
    pub csv: String,
    pub rows: usize,
}

/// `n` leaves seeded evenly on a circle, traced forward.
pub fn leaves(target: &Target, n: usize, opt: &LeafOptions) -> Result<Table, Failure> {
    let f = target.system.foliation.as_ref().ok_or_else(|| InputError::new("MissingInput", "the scenario has no foliation"))?;
    let center = target.resolve(&opt.around)?.location;
    if !(opt.seed_radius > 0.0 && opt.step > 0.0 && opt.length > 0.0) {
        return Err(InputError::new("BadFlag", "--seed-radius, --step and --length must be positive").into());
    }
    let mut csv = String::from("leaf_id,s,x,y\n");
    let mut rows = 0;
    for k in 0..n {
        let seed = center + Vec2::polar(TAU * k as f64 / n as f64).scale(opt.seed_radius);
        let leaf = integrate_leaf(f, seed, opt.step, opt.length, opt.step / 10.0)?;
        for (z, s) in leaf.vertices.iter().zip(&leaf.arclength) {
            writeln!(csv, "{k},{s},{},{}", z.x, z.y).expect("string write");
            rows += 1;
        }
    }
    Ok(Table { csv, rows })
}

/// `z, f(z), …, f^steps(z)` under the time-one map.
pub fn orbit(target: &Target, start: &str, steps: usize) -> Result<Table, Failure> {
    let z0 = target.resolve(start)?;
    let iso = z0
        .isotopy
        .as_ref()
        .or(target.system.isotopy.as_ref())
        .ok_or_else(|| InputError::new("MissingInput", "the scenario has no isotopy"))?;
    let mut csv = String::from("iter,x,y\n");
    let mut z = z0.location;
    for k in 0..=steps {
        if k > 0 {
            z = iso.time_one(z)?;
        }
        writeln!(csv, "{k},{},{}", z.x, z.y).expect("string write");
    }
    Ok(Table { csv, rows: steps + 1 })
}
