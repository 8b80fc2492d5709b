use std::path::{Path, PathBuf};

use ads_core::Complex64;
use boundary_data::QuasiSymmetricMap;
use cmc_solver::{SolverOptions, SweepOptions, Truncation, MAX_ABS_H, MIN_N_R, MIN_N_THETA, R_MAX_RANGE};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum BoundarySpec {
    #[default]
    Identity,
    Mobius {
        #[serde(default)]
        a_re: f64,
        #[serde(default)]
        a_im: f64,
        #[serde(default)]
        rot: f64,
    },
    Trig {
        amplitude: f64,
        frequency: u32,
    },
    Shear {
        shear: f64,
    },
}

impl BoundarySpec {
    pub fn build(&self) -> Result<QuasiSymmetricMap, CliError> {
        let map = match *self {
            BoundarySpec::Identity => Ok(QuasiSymmetricMap::identity()),
            BoundarySpec::Mobius { a_re, a_im, rot } => QuasiSymmetricMap::mobius(Complex64::new(a_re, a_im), rot),
            BoundarySpec::Trig { amplitude, frequency } => QuasiSymmetricMap::trig(amplitude, frequency),
            BoundarySpec::Shear { shear } => QuasiSymmetricMap::shear(shear),
        };
        map.map_err(|e| CliError::Config(format!("boundary: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(rename = "R_max")]
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { r_max: 3.0, n_r: 64, n_theta: 128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol_newton: f64,
    pub tol_mono: f64,
    pub eps_sl: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let s = SolverOptions::default();
        Self { tol_newton: s.tol_newton, tol_mono: SweepOptions::default().tol_mono, eps_sl: s.eps_sl }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruncationConfig {
    #[default]
    Tail,
    Bare,
}

impl From<TruncationConfig> for Truncation {
    fn from(t: TruncationConfig) -> Self {
        match t {
            TruncationConfig::Tail => Truncation::UmbilicTail,
            TruncationConfig::Bare => Truncation::Bare,
        }
    }
}

/// One run. Every field has a default (`{}` is the maximal plane on the
/// baseline mesh), and the manifest echoes the materialized values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(rename = "H_grid", default = "default_h_grid")]
    pub h_grid: Vec<f64>,
    #[serde(default)]
    pub mesh: MeshConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub truncation: TruncationConfig,
    /// Offset of the quadruple sequence used for the boundary norm estimate.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_h_grid() -> Vec<f64> {
    vec![0.0]
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        let t = &self.tolerances;
        for (name, v) in [("tol_newton", t.tol_newton), ("tol_mono", t.tol_mono), ("eps_sl", t.eps_sl)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerances.{name} must be positive, got {v}"));
            }
        }
        if self.h_grid.is_empty() {
            return bad("H_grid is empty".into());
        }
        if let Some(h) = self.h_grid.iter().find(|h| !(h.abs() <= MAX_ABS_H)) {
            return bad(format!("H = {h} outside [-{MAX_ABS_H}, {MAX_ABS_H}]"));
        }
        if self.h_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("H_grid must be strictly increasing".into());
        }
        let m = &self.mesh;
        if !(m.r_max >= R_MAX_RANGE.0 && m.r_max <= R_MAX_RANGE.1) {
            return bad(format!("mesh.R_max = {} outside [{}, {}]", m.r_max, R_MAX_RANGE.0, R_MAX_RANGE.1));
        }
        if m.n_r < MIN_N_R {
            return bad(format!("mesh.n_r = {} below {MIN_N_R}", m.n_r));
        }
        if m.n_theta < MIN_N_THETA || m.n_theta % 2 == 1 {
            return bad(format!("mesh.n_theta = {} must be even and at least {MIN_N_THETA}", m.n_theta));
        }
        self.boundary.build()?;
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            tol_newton: self.tolerances.tol_newton,
            eps_sl: self.tolerances.eps_sl,
            ..SolverOptions::default()
        }
    }
}
