use polar_dqw::dump::save_field;
use polar_dqw::em::{uniform_b_potential, EmWalk, UniformMagneticSpec};
use polar_dqw::landau::{
    eigenstate_field, make_landau_spec, normalization_quadrature_check, LandauSpec,
};
use polar_dqw::observables::{angular_momentum, even_mode_energy_fraction};
use polar_dqw::walk::WalkParams;
use serde::Serialize;

use crate::commands::convergence::{eigen_step, strictly_decreasing, sweep, ConvergenceRow};
use crate::config::{LandauConfig, RunConfig};
use crate::error::HarnessResult;
use crate::output::{ensure_dir, write_json};
use crate::setup::landau_spec;

pub const J_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-10;
pub const QUADRATURE_TOL: f64 = 1e-6;
pub const EVEN_MODE_TOL: f64 = 1e-12;
pub const RESIDUAL_WINDOW: (f64, f64) = (1.0, 20.0);
const RESIDUAL_POINTS: usize = 2000;
const EVEN_MODE_STEPS: usize = 50;

/// Largest residual of the radial equations on an even `r` grid over the window.
pub fn max_residual(spec: &LandauSpec) -> HarnessResult<f64> {
    let (a, b) = RESIDUAL_WINDOW;
    let mut worst: f64 = 0.0;
    for i in 0..=RESIDUAL_POINTS {
        let r = a + (b - a) * i as f64 / RESIDUAL_POINTS as f64;
        let (m, p) = spec.ode_residual(r)?;
        worst = worst.max(m).max(p);
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyResidual {
    pub n: i64,
    pub alpha: i64,
    pub max_residual: f64,
    pub quadrature: f64,
}

/// Residual and normalization over `1 <= n <= 5`, `−n <= α <= 8` at the
/// configured field strength and mass.
pub fn family_sweep(cfg: &LandauConfig) -> HarnessResult<Vec<FamilyResidual>> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for alpha in -n..=8 {
            let spec = make_landau_spec(n, alpha, cfg.beta, cfg.mass)?;
            out.push(FamilyResidual {
                n,
                alpha,
                max_residual: max_residual(&spec)?,
                quadrature: normalization_quadrature_check(&spec)?,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenstateSidecar {
    pub n: i64,
    pub alpha: i64,
    pub beta: f64,
    pub mass: f64,
    pub energy: f64,
    pub kappa: f64,
    pub c2: f64,
    pub n_theta: usize,
    pub n_r: usize,
    pub r_min: f64,
    pub eps: f64,
    pub analytic_norm_sqr: f64,
    pub normalization_ratio: f64,
    pub tail_ratio: f64,
    pub inner_tail_mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LandauCheckReport {
    pub landau: LandauConfig,
    pub energy: f64,
    pub kappa: f64,
    pub n_theta: usize,
    pub angular_momentum: f64,
    pub angular_momentum_error: f64,
    pub step: ConvergenceRow,
    pub fidelity: f64,
    pub max_residual: f64,
    pub normalization_quadrature: f64,
    pub family_max_residual: f64,
    pub family_max_quadrature_error: f64,
    pub even_mode_fraction_after_steps: f64,
    pub even_mode_steps: usize,
    pub fidelity_sweep: Vec<ConvergenceRow>,
    pub fidelity_deviation_decreasing: bool,
    pub passed: bool,
}

pub fn cmd_landau_check(cfg: &RunConfig) -> HarnessResult<LandauCheckReport> {
    cfg.validate()?;
    ensure_dir(&cfg.out_dir)?;
    let spec = landau_spec(&cfg.landau)?;
    let grid = cfg.grid.build()?;
    let eig = eigenstate_field(grid, &spec, 0.0)?;

    save_field(&cfg.out_dir.join("eigenstate.pdqw"), &eig.field)?;
    write_json(
        &cfg.out_dir.join("eigenstate.json"),
        &EigenstateSidecar {
            n: spec.n,
            alpha: spec.alpha,
            beta: spec.beta,
            mass: spec.mass,
            energy: spec.energy,
            kappa: spec.kappa,
            c2: spec.c2,
            n_theta: grid.n_theta(),
            n_r: grid.n_r(),
            r_min: grid.r_min(),
            eps: grid.eps(),
            analytic_norm_sqr: eig.analytic_norm_sqr,
            normalization_ratio: eig.normalization_ratio,
            tail_ratio: eig.tail_ratio,
            inner_tail_mass: eig.inner_tail_mass,
        },
    )?;

    let j = angular_momentum(&eig.field)?;
    let step = eigen_step(&spec, grid, cfg)?;

    let params = WalkParams::new(spec.mass, cfg.walk.boundary.into())?;
    let walk = EmWalk::new(
        grid,
        &params,
        uniform_b_potential(UniformMagneticSpec { beta: spec.beta })?,
    )?
    .with_field_time(cfg.field_time.into());
    let mut evolved = eig.field.clone();
    for s in 0..EVEN_MODE_STEPS {
        walk.step(&mut evolved, 2.0 * grid.eps() * s as f64)?;
    }
    let even = even_mode_energy_fraction(&evolved)?;

    let family = family_sweep(&cfg.landau)?;
    let family_max_residual = family.iter().map(|f| f.max_residual).fold(0.0, f64::max);
    let family_max_quadrature_error = family
        .iter()
        .map(|f| (f.quadrature - 1.0).abs())
        .fold(0.0, f64::max);

    let fidelity_sweep = sweep(&spec, cfg)?;
    let fid: Vec<f64> = fidelity_sweep
        .iter()
        .map(|r| r.fidelity_deviation)
        .collect();
    let fidelity_deviation_decreasing = strictly_decreasing(&fid);

    let max_res = max_residual(&spec)?;
    let quad = normalization_quadrature_check(&spec)?;
    let angular_momentum_error = (j - spec.angular_momentum()).abs();
    let passed = angular_momentum_error < J_TOL
        && max_res < RESIDUAL_TOL
        && (quad - 1.0).abs() < QUADRATURE_TOL
        && family_max_residual < RESIDUAL_TOL
        && family_max_quadrature_error < QUADRATURE_TOL
        && even < EVEN_MODE_TOL
        && fidelity_deviation_decreasing;
    let report = LandauCheckReport {
        landau: cfg.landau.clone(),
        energy: spec.energy,
        kappa: spec.kappa,
        n_theta: grid.n_theta(),
        angular_momentum: j,
        angular_momentum_error,
        fidelity: 1.0 - step.fidelity_deviation,
        step,
        max_residual: max_res,
        normalization_quadrature: quad,
        family_max_residual,
        family_max_quadrature_error,
        even_mode_fraction_after_steps: even,
        even_mode_steps: EVEN_MODE_STEPS,
        fidelity_sweep,
        fidelity_deviation_decreasing,
        passed,
    };
    write_json(&cfg.out_dir.join("landau_check.json"), &report)?;
    Ok(report)
}
