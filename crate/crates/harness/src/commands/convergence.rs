use std::time::Instant;

use polar_dqw::em::{uniform_b_potential, EmWalk, UniformMagneticSpec};
use polar_dqw::field::{inner_product, l1_distance};
use polar_dqw::landau::{eigenstate_field, LandauSpec};
use polar_dqw::walk::WalkParams;
use polar_dqw::{PolarGrid, C64};
use serde::Serialize;

use crate::config::{LandauConfig, RunConfig, TauChoice};
use crate::error::{HarnessError, HarnessResult};
use crate::output::{ensure_dir, num, write_json, TaggedCsv, CONVERGENCE_FORMAT};
use crate::setup::landau_spec;

/// One eigenstate step at one resolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_theta: usize,
    pub eps: f64,
    /// `Σ|Φ¹ − e^{−iEτ}Φ⁰| ε²` with the configured `τ`.
    pub delta: f64,
    /// Same with the other `τ` choice.
    pub delta_alt_tau: f64,
    /// `1 − |⟨Φ⁰|Φ¹⟩|`.
    pub fidelity_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

/// Start from the sampled eigenstate, take one coupled step and compare
/// against the continuum phase evolution.
pub fn eigen_step(
    spec: &LandauSpec,
    grid: PolarGrid,
    cfg: &RunConfig,
) -> HarnessResult<ConvergenceRow> {
    let start = Instant::now();
    let phi0 = eigenstate_field(grid, spec, 0.0)?.field;
    let params = WalkParams::new(spec.mass, cfg.walk.boundary.into())?;
    let pot = uniform_b_potential(UniformMagneticSpec { beta: spec.beta })?;
    let walk = EmWalk::new(grid, &params, pot)?.with_field_time(cfg.field_time.into());
    let mut phi1 = phi0.clone();
    walk.step(&mut phi1, 0.0)?;

    let eps = grid.eps();
    let delta_for = |tau: TauChoice| -> HarnessResult<f64> {
        let target = phi0.scaled(C64::from_polar(1.0, -spec.energy * tau.tau(eps)));
        Ok(l1_distance(&phi1, &target)?)
    };
    let fidelity = inner_product(&phi0, &phi1)?.norm();
    Ok(ConvergenceRow {
        n_theta: grid.n_theta(),
        eps,
        delta: delta_for(cfg.tau)?,
        delta_alt_tau: delta_for(cfg.tau.other())?,
        fidelity_deviation: 1.0 - fidelity,
        runtime_s: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

pub fn sweep(spec: &LandauSpec, cfg: &RunConfig) -> HarnessResult<Vec<ConvergenceRow>> {
    for &n in &cfg.convergence.n_thetas {
        if n % 2 != 0 {
            return Err(HarnessError::config(
                "config.convergence",
                format!("n_theta {n} is odd"),
            ));
        }
    }
    cfg.convergence
        .n_thetas
        .iter()
        .map(|&n| eigen_step(spec, cfg.grid.build_with(n)?, cfg))
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Values strictly decreasing as `n_theta` grows (rows in sweep order).
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub mass: f64,
    pub energy: f64,
    pub rows: Vec<ConvergenceRow>,
    pub slope: f64,
    pub delta_strictly_decreasing: bool,
    pub fidelity_deviation_decreasing: bool,
}

impl SweepSummary {
    fn new(spec: &LandauSpec, rows: Vec<ConvergenceRow>) -> Self {
        let eps: Vec<f64> = rows.iter().map(|r| r.eps).collect();
        let delta: Vec<f64> = rows.iter().map(|r| r.delta).collect();
        let fid: Vec<f64> = rows.iter().map(|r| r.fidelity_deviation).collect();
        SweepSummary {
            mass: spec.mass,
            energy: spec.energy,
            slope: log_log_slope(&eps, &delta),
            delta_strictly_decreasing: strictly_decreasing(&delta),
            fidelity_deviation_decreasing: strictly_decreasing(&fid),
            rows,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub format: &'static str,
    pub landau: LandauConfig,
    pub tau: TauChoice,
    pub r_min: f64,
    pub r_max: f64,
    pub min_slope: f64,
    pub primary: SweepSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub massless: Option<SweepSummary>,
    pub passed: bool,
}

pub fn cmd_convergence(cfg: &RunConfig) -> HarnessResult<ConvergenceReport> {
    cfg.validate()?;
    ensure_dir(&cfg.out_dir)?;
    let spec = landau_spec(&cfg.landau)?;
    let primary = SweepSummary::new(&spec, sweep(&spec, cfg)?);

    let massless = if cfg.convergence.massless_sweep {
        let massless_cfg = LandauConfig {
            mass: 0.0,
            ..cfg.landau.clone()
        };
        let spec0 = landau_spec(&massless_cfg)?;
        Some(SweepSummary::new(&spec0, sweep(&spec0, cfg)?))
    } else {
        None
    };

    let mut header = vec!["n_theta", "eps", "delta", "fidelity_deviation"];
    if cfg.timing {
        header.push("runtime_s");
    }
    let mut csv = TaggedCsv::create(
        &cfg.out_dir.join("convergence.csv"),
        CONVERGENCE_FORMAT,
        &header,
    )?;
    for r in &primary.rows {
        let mut rec = vec![
            r.n_theta.to_string(),
            num(r.eps),
            num(r.delta),
            num(r.fidelity_deviation),
        ];
        if let Some(t) = r.runtime_s {
            rec.push(num(t));
        }
        csv.row(&rec)?;
    }
    csv.finish()?;

    let sweep_ok =
        |s: &SweepSummary| s.delta_strictly_decreasing && s.fidelity_deviation_decreasing;
    let passed = sweep_ok(&primary)
        && primary.slope >= cfg.convergence.min_slope
        && massless
            .as_ref()
            .is_none_or(|m| m.delta_strictly_decreasing);
    let grid = cfg.grid.build()?;
    let report = ConvergenceReport {
        format: CONVERGENCE_FORMAT,
        landau: cfg.landau.clone(),
        tau: cfg.tau,
        r_min: grid.r_min(),
        r_max: cfg.grid.r_max.unwrap_or(grid.r_max()),
        min_slope: cfg.convergence.min_slope,
        primary,
        massless,
        passed,
    };
    write_json(&cfg.out_dir.join("convergence.json"), &report)?;
    Ok(report)
}
