//! Operation flags, shared by the command line and scenario presets.

use clap::Args;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Point of interest: `x,y` or a named point.
    #[arg(long, alias = "center")]
    #[serde(default, alias = "center", skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    /// Radius of the test circle.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Samples on the test circle.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// First fixed point for `linking`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z0: Option<String>,
    /// Second fixed point for `linking`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z1: Option<String>,
    /// Time samples along trajectories.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_samples: Option<usize>,
    /// Extra full turns about the point (or `z0`) composed with the isotopy.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turns: Option<i64>,
    /// Outer radius of the first rotation-set window.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Divergence threshold for rotation-set estimates.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<usize>,
    /// Grid size for searches.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Search window `x_min,x_max,y_min,y_max`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    /// Use the two-phase isotopy of a generating function.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub alternate: bool,
}

impl Params {
    /// Command-line values win over preset values.
    pub fn over(self, preset: &Params) -> Params {
        let p = preset.clone();
        Params {
            at: self.at.or(p.at),
            radius: self.radius.or(p.radius),
            samples: self.samples.or(p.samples),
            z0: self.z0.or(p.z0),
            z1: self.z1.or(p.z1),
            t_samples: self.t_samples.or(p.t_samples),
            turns: self.turns.or(p.turns),
            r0: self.r0.or(p.r0),
            levels: self.levels.or(p.levels),
            n_max: self.n_max.or(p.n_max),
            threshold: self.threshold.or(p.threshold),
            seeds: self.seeds.or(p.seeds),
            grid: self.grid.or(p.grid),
            region: self.region.or(p.region),
            alternate: self.alternate || p.alternate,
        }
    }
}
