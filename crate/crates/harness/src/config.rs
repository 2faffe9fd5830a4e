//! Run configuration: one JSON document, every field overridable from the CLI.

use std::path::{Path, PathBuf};

use polar_dqw::em::FieldTime;
use polar_dqw::walk::{Boundary, WalkParams};
use polar_dqw::PolarGrid;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, HarnessResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_theta: usize,
    pub r_min: f64,
    /// Number of radii; when absent, derived from `r_max`.
    pub n_r: Option<usize>,
    pub r_max: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_theta: 128,
            r_min: 1.0,
            n_r: None,
            r_max: Some(42.0),
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> HarnessResult<PolarGrid> {
        self.build_with(self.n_theta)
    }

    /// Same radial window, different angular resolution.
    pub fn build_with(&self, n_theta: usize) -> HarnessResult<PolarGrid> {
        let grid = match (self.n_r, self.r_max) {
            (Some(n_r), _) => PolarGrid::new(n_theta, self.r_min, n_r)?,
            (None, Some(r_max)) => PolarGrid::covering(n_theta, self.r_min, r_max)?,
            (None, None) => {
                return Err(HarnessError::config(
                    "config.grid",
                    "grid needs n_r or r_max",
                ))
            }
        };
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryChoice {
    Periodic,
    Absorbing,
}

impl From<BoundaryChoice> for Boundary {
    fn from(b: BoundaryChoice) -> Self {
        match b {
            BoundaryChoice::Periodic => Boundary::Periodic,
            BoundaryChoice::Absorbing => Boundary::AbsorbingZero,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkConfig {
    pub mass: f64,
    pub boundary: BoundaryChoice,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            mass: 1.0,
            boundary: BoundaryChoice::Periodic,
        }
    }
}

impl WalkConfig {
    pub fn params(&self) -> HarnessResult<WalkParams> {
        Ok(WalkParams::new(self.mass, self.boundary.into())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    None,
    UniformB {
        beta: f64,
    },
    /// CSV with header `j,h,A_t,A_r,A_theta`, one row per site.
    Table {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LandauConfig {
    pub n: i64,
    pub alpha: i64,
    pub beta: f64,
    pub mass: f64,
}

impl Default for LandauConfig {
    fn default() -> Self {
        LandauConfig {
            n: 1,
            alpha: 5,
            beta: 0.1,
            mass: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialConfig {
    /// The eigenstate described by the `landau` section.
    Landau,
    /// `e^{−(r−r0)²/(2w²)} e^{ikθ}` in both components; `k` half-integer.
    ModePacket {
        k: f64,
        r0: f64,
        width: f64,
    },
    /// Random anti-periodic field with half-integer modes `|k| <= max_k`.
    Random {
        seed: u64,
        max_k: f64,
    },
    Dump {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TauChoice {
    Eps,
    TwoEps,
}

impl TauChoice {
    pub fn tau(self, eps: f64) -> f64 {
        match self {
            TauChoice::Eps => eps,
            TauChoice::TwoEps => 2.0 * eps,
        }
    }

    pub fn other(self) -> Self {
        match self {
            TauChoice::Eps => TauChoice::TwoEps,
            TauChoice::TwoEps => TauChoice::Eps,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FieldTimeChoice {
    PostStep,
    PreStep,
}

impl From<FieldTimeChoice> for FieldTime {
    fn from(f: FieldTimeChoice) -> Self {
        match f {
            FieldTimeChoice::PostStep => FieldTime::PostStep,
            FieldTimeChoice::PreStep => FieldTime::PreStep,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub n_thetas: Vec<usize>,
    pub min_slope: f64,
    /// Also sweep the massless state (energy recomputed with `m = 0`).
    pub massless_sweep: bool,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            n_thetas: vec![64, 128, 256, 512],
            min_slope: 0.8,
            massless_sweep: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub walk: WalkConfig,
    pub potential: PotentialConfig,
    pub landau: LandauConfig,
    pub initial: InitialConfig,
    pub steps: usize,
    /// Dump cadence in steps; 0 writes only the final field.
    pub dump_every: usize,
    pub out_dir: PathBuf,
    pub tau: TauChoice,
    pub field_time: FieldTimeChoice,
    pub convergence: ConvergenceConfig,
    /// Write wall-clock runtimes into convergence output (not reproducible).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridConfig::default(),
            walk: WalkConfig::default(),
            potential: PotentialConfig::None,
            landau: LandauConfig::default(),
            initial: InitialConfig::Random {
                seed: 1,
                max_k: 8.5,
            },
            steps: 0,
            dump_every: 0,
            out_dir: PathBuf::from("pdqw-out"),
            tau: TauChoice::TwoEps,
            field_time: FieldTimeChoice::PostStep,
            convergence: ConvergenceConfig::default(),
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> HarnessResult<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::config("config.parse", e.to_string()))
    }

    pub fn load(path: &Path) -> HarnessResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::io("io.config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Check the parts every command relies on, including that referenced
    /// input files exist.
    pub fn validate(&self) -> HarnessResult<()> {
        self.grid.build()?;
        self.walk.params()?;
        if let PotentialConfig::UniformB { beta } = self.potential {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(HarnessError::config(
                    "config.potential",
                    format!("beta must be positive, got {beta}"),
                ));
            }
        }
        let mut inputs = Vec::new();
        if let PotentialConfig::Table { path } = &self.potential {
            inputs.push(path);
        }
        if let InitialConfig::Dump { path } = &self.initial {
            inputs.push(path);
        }
        for p in inputs {
            if !p.is_file() {
                return Err(HarnessError::config(
                    "config.missing_input",
                    format!("{} does not exist", p.display()),
                ));
            }
        }
        if let InitialConfig::ModePacket { k, width, .. } = self.initial {
            if (k - 0.5).fract() != 0.0 {
                return Err(HarnessError::config(
                    "config.initial",
                    format!("mode k={k} is not half-integer"),
                ));
            }
            if width.is_nan() || width <= 0.0 {
                return Err(HarnessError::config(
                    "config.initial",
                    "packet width must be positive",
                ));
            }
        }
        if self.convergence.n_thetas.len() < 2 {
            return Err(HarnessError::config(
                "config.convergence",
                "sweep needs at least two n_theta values",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_json() {
        let c = RunConfig {
            potential: PotentialConfig::UniformB { beta: 0.1 },
            initial: InitialConfig::ModePacket {
                k: 2.5,
                r0: 10.0,
                width: 2.0,
            },
            ..RunConfig::default()
        };
        let text = serde_json::to_string_pretty(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn partial_documents_fill_defaults() {
        let c = RunConfig::from_json(r#"{"grid": {"n_theta": 64, "n_r": 10}, "potential": {"kind": "uniform-b", "beta": 0.2}}"#).unwrap();
        assert_eq!(c.grid.n_theta, 64);
        assert_eq!(c.grid.r_min, 1.0);
        assert_eq!(c.walk, WalkConfig::default());
        assert_eq!(c.potential, PotentialConfig::UniformB { beta: 0.2 });
    }

    #[test]
    fn rejects_bad_documents() {
        let err = RunConfig::from_json(r#"{"grdi": {}}"#).unwrap_err();
        assert_eq!(err.code, "config.parse");
        let mut c = RunConfig {
            initial: InitialConfig::ModePacket {
                k: 2.0,
                r0: 5.0,
                width: 1.0,
            },
            ..RunConfig::default()
        };
        assert_eq!(c.validate().unwrap_err().code, "config.initial");
        c.initial = InitialConfig::Dump {
            path: "/nonexistent/field.pdqw".into(),
        };
        assert_eq!(c.validate().unwrap_err().code, "config.missing_input");
        c.initial = InitialConfig::Landau;
        c.grid.n_theta = 7;
        assert_eq!(c.validate().unwrap_err().code, "config.grid");
    }
}
