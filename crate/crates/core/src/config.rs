//! Run configuration files (JSON).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bvp::Geometry;
use crate::error::ProofError;
use crate::interval::Interval;
use crate::numstr::parse_interval;
use crate::problem::{self, CustomProblemSpec, EllipticProblem};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub geometry: Geometry,
    pub truncation: Truncation,
    #[serde(default)]
    pub manifold: ManifoldSpec,
    /// A-priori radius; chosen from the Newton residual when absent.
    #[serde(default)]
    pub varrho: Option<f64>,
    pub seed: SeedSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProblemSpec {
    Builtin {
        builtin: String,
        #[serde(default)]
        params: BTreeMap<String, String>,
    },
    Custom {
        custom: CustomProblemSpec,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    #[serde(rename = "n_T_num")]
    pub n_t_num: usize,
    #[serde(rename = "n_T_pad")]
    pub n_t_pad: usize,
    #[serde(rename = "n_C_num")]
    pub n_c_num: usize,
    #[serde(rename = "n_C_pad")]
    pub n_c_pad: usize,
    pub nu: f64,
}

impl Truncation {
    pub fn n_t(&self) -> usize {
        self.n_t_num + self.n_t_pad
    }

    pub fn n_c(&self) -> usize {
        self.n_c_num + self.n_c_pad
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LySpec {
    Fixed(f64),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    #[serde(rename = "Lx", default = "one")]
    pub lx: f64,
    #[serde(rename = "Ly", default = "auto")]
    pub ly: LySpec,
}

fn one() -> f64 {
    1.0
}

fn auto() -> LySpec {
    LySpec::Auto(AutoTag::Auto)
}

impl Default for ManifoldSpec {
    fn default() -> Self {
        ManifoldSpec { lx: 1.0, ly: auto() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum SeedSpec {
    /// Shooting on `u(0)` (scalar problems only).
    Shoot {
        phi_range: [f64; 2],
        /// Number of sign changes of `u - c` of the sought profile.
        #[serde(default)]
        crossings: usize,
    },
    Samples {
        path: PathBuf,
    },
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, ProofError> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config; a relative seed path is taken relative to the file.
    pub fn load(path: &Path) -> Result<Self, ProofError> {
        let text = std::fs::read_to_string(path).map_err(|e| ProofError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg = RunConfig::from_json(&text)?;
        if let SeedSpec::Samples { path: p } = &mut cfg.seed {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ProofError> {
        let bad = |m: &str| Err(ProofError::InvalidConfig(m.to_string()));
        let g = &self.geometry;
        if !(g.ell > 0.0 && g.l > 0.0 && g.r_star > 0.0 && g.r_star < 1.0) {
            return bad("geometry needs ell > 0, L > 0 and 0 < r_star < 1");
        }
        let t = &self.truncation;
        if t.n_t_num < 2 || t.n_c_num < 1 {
            return bad("need n_T_num >= 2 and n_C_num >= 1");
        }
        if !(t.nu >= 1.0 && t.nu.is_finite()) {
            return bad("nu must be at least 1");
        }
        // r*^(n_T+1) ≤ 1/e, with e rounded up
        let e_up = Interval::point(std::f64::consts::E.next_up());
        let lhs = Interval::point(g.r_star).powi(t.n_t() as u32 + 1);
        if !(lhs.hi() <= (Interval::ONE / e_up).lo()) {
            return bad("r_star exceeds exp(-1/(n_T+1))");
        }
        if !(self.manifold.lx > 0.0) {
            return bad("Lx must be positive");
        }
        if let LySpec::Fixed(ly) = self.manifold.ly {
            if !(ly > 0.0) {
                return bad("Ly must be positive or \"auto\"");
            }
        }
        if let Some(v) = self.varrho {
            if !(v > 0.0) {
                return bad("varrho must be positive");
            }
        }
        if let SeedSpec::Shoot { phi_range, .. } = self.seed {
            if !(phi_range[0] < phi_range[1]) {
                return bad("phi_range must be increasing");
            }
        }
        Ok(())
    }
}

fn param(params: &BTreeMap<String, String>, key: &str, default: &str) -> Result<Interval, ProofError> {
    let s = params.get(key).map(String::as_str).unwrap_or(default);
    parse_interval(s).map_err(|e| ProofError::InvalidConfig(format!("parameter {key}: {e}")))
}

/// Builtin names: `klein-gordon`, `swift-hohenberg`, `fhn3`.
pub fn build_problem(spec: &ProblemSpec) -> Result<EllipticProblem, ProofError> {
    match spec {
        ProblemSpec::Custom { custom } => custom.build(),
        ProblemSpec::Builtin { builtin, params } => {
            let known: &[&str] = match builtin.as_str() {
                "klein-gordon" => &["beta1", "beta2"],
                "swift-hohenberg" => &["beta1", "beta2", "beta3", "beta4"],
                "fhn3" => &["eps", "beta1", "beta2", "beta3", "beta4"],
                other => return Err(ProofError::InvalidConfig(format!("unknown builtin problem {other:?}"))),
            };
            if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
                return Err(ProofError::InvalidConfig(format!("unknown parameter {k:?} for {builtin}")));
            }
            match builtin.as_str() {
                "klein-gordon" => problem::klein_gordon(param(params, "beta1", "1")?, param(params, "beta2", "1")?),
                "swift-hohenberg" => problem::swift_hohenberg([
                    param(params, "beta1", "-3/5")?,
                    param(params, "beta2", "sqrt(6)")?,
                    param(params, "beta3", "-1/10")?,
                    param(params, "beta4", "1")?,
                ]),
                _ => problem::fitzhugh_nagumo(
                    param(params, "eps", "3/10")?,
                    [
                        param(params, "beta1", "1/2")?,
                        param(params, "beta2", "1/2")?,
                        param(params, "beta3", "1")?,
                        param(params, "beta4", "3")?,
                    ],
                ),
            }
        }
    }
}
