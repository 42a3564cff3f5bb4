//! JSON run configuration. Unknown keys are rejected so typos fail loudly;
//! the schema is documented in docs/config.schema.json.

// `!(x > 0)` rejects NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use sc_obstacle::{Error, Result};
use serde::Deserialize;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub command: String,
    #[serde(default = "default_profile")]
    pub profile: String,
    #[serde(default = "default_potential")]
    pub potential: String,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_mesh")]
    pub mesh: String,
    #[serde(default = "default_field")]
    pub field: String,
    pub beta: Option<f64>,
    pub betas: Option<BetaRange>,
    #[serde(default = "default_solver")]
    pub solver: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_sweeps")]
    pub max_sweeps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out: String,
    #[serde(default)]
    pub svg: bool,
    pub kappas: Option<Vec<f64>>,
    pub c: Option<f64>,
    pub big_c: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetaRange {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    #[serde(default = "default_spacing")]
    pub spacing: String,
}

fn default_profile() -> String {
    "sphere".into()
}
fn default_potential() -> String {
    "uniform".into()
}
fn default_n() -> usize {
    1024
}
fn default_mesh() -> String {
    "icosphere:4".into()
}
fn default_field() -> String {
    "z".into()
}
fn default_solver() -> String {
    "pgs".into()
}
fn default_tol() -> f64 {
    1e-11
}
fn default_max_sweeps() -> usize {
    5_000_000
}
fn default_out() -> String {
    "out".into()
}
fn default_spacing() -> String {
    "log".into()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Parse(format!(
                "config version {} unsupported (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Parse("tol must be positive".into()));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0) {
                return Err(Error::Parse(format!("beta = {b} must be positive")));
            }
        }
        if let Some(r) = &self.betas {
            if !(r.lo > 0.0 && r.hi > r.lo && r.count >= 2) {
                return Err(Error::Parse("betas need 0 < lo < hi and count >= 2".into()));
            }
            if r.spacing != "log" && r.spacing != "lin" {
                return Err(Error::Parse(format!("unknown spacing {:?}", r.spacing)));
            }
        }
        Ok(())
    }
}

impl BetaRange {
    pub fn values(&self) -> Vec<f64> {
        if self.spacing == "lin" {
            sc_obstacle::grid::linspace(self.lo, self.hi, self.count)
        } else {
            sc_obstacle::grid::logspace(self.lo, self.hi, self.count)
        }
    }
}
