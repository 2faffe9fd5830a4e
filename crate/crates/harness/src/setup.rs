//! Turning a [`RunConfig`] into grids, fields, potentials and steppers.

use std::path::Path;

use polar_dqw::dump::load_field;
use polar_dqw::em::{uniform_b_potential, EmWalk, PotentialSpec, UniformMagneticSpec};
use polar_dqw::landau::{eigenstate_field, make_landau_spec, LandauSpec};
use polar_dqw::walk::FreeWalk;
use polar_dqw::{PolarGrid, SpinBasis, Spinor, SpinorField, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::config::{InitialConfig, LandauConfig, PotentialConfig, RunConfig};
use crate::error::{HarnessError, HarnessResult};

pub fn landau_spec(cfg: &LandauConfig) -> HarnessResult<LandauSpec> {
    Ok(make_landau_spec(cfg.n, cfg.alpha, cfg.beta, cfg.mass)?)
}

#[derive(Deserialize)]
struct TableRow {
    j: usize,
    h: usize,
    #[serde(rename = "A_t")]
    a_t: f64,
    #[serde(rename = "A_r")]
    a_r: f64,
    #[serde(rename = "A_theta")]
    a_theta: f64,
}

/// Read a per-site potential table; every site must appear exactly once.
pub fn load_potential_table(path: &Path, grid: PolarGrid) -> HarnessResult<PotentialSpec> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut values = vec![[f64::NAN; 3]; grid.sites()];
    let mut seen = vec![false; grid.sites()];
    for row in reader.deserialize() {
        let row: TableRow = row?;
        if row.j >= grid.n_r() || row.h >= grid.n_theta() {
            return Err(HarnessError::config(
                "config.potential",
                format!("table site ({}, {}) outside the grid", row.j, row.h),
            ));
        }
        let idx = row.j * grid.n_theta() + row.h;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(HarnessError::config(
                "config.potential",
                format!("duplicate table site ({}, {})", row.j, row.h),
            ));
        }
        values[idx] = [row.a_t, row.a_r, row.a_theta];
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(HarnessError::config(
            "config.potential",
            format!(
                "table lacks site ({}, {})",
                missing / grid.n_theta(),
                missing % grid.n_theta()
            ),
        ));
    }
    Ok(PotentialSpec::from_site_values(grid, values)?)
}

pub fn build_potential(cfg: &RunConfig, grid: PolarGrid) -> HarnessResult<Option<PotentialSpec>> {
    Ok(match &cfg.potential {
        PotentialConfig::None => None,
        PotentialConfig::UniformB { beta } => {
            Some(uniform_b_potential(UniformMagneticSpec { beta: *beta })?)
        }
        PotentialConfig::Table { path } => Some(load_potential_table(path, grid)?),
    })
}

/// Random polar-basis field made of half-integer angular modes `|k| <= max_k`
/// with independent random radial profiles, normalized to one.
pub fn random_antiperiodic(grid: PolarGrid, seed: u64, max_k: f64) -> HarnessResult<SpinorField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n_theta() as i64;
    let ks: Vec<f64> = (-n / 2..n / 2)
        .filter(|s| s.rem_euclid(2) == 1)
        .map(|s| s as f64 / 2.0)
        .filter(|k| k.abs() <= max_k)
        .collect();
    if ks.is_empty() {
        return Err(HarnessError::config(
            "config.initial",
            format!("no half-integer modes with |k| <= {max_k}"),
        ));
    }
    let mut draw = || C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
    let mut field = SpinorField::zeros(grid, SpinBasis::Polar);
    for j in 0..grid.n_r() {
        let coeffs: Vec<(C64, C64)> = ks.iter().map(|_| (draw(), draw())).collect();
        for h in 0..grid.n_theta() {
            let th = grid.theta(h);
            let mut s = Spinor::zero();
            for (k, (a, b)) in ks.iter().zip(&coeffs) {
                let e = C64::from_polar(1.0, k * th);
                s.minus += a * e;
                s.plus += b * e;
            }
            field.set(j, h, s);
        }
    }
    field.normalize()?;
    Ok(field)
}

/// The initial field. A dump input brings its own grid.
pub fn initial_field(cfg: &RunConfig) -> HarnessResult<SpinorField> {
    match &cfg.initial {
        InitialConfig::Dump { path } => Ok(load_field(path)?),
        InitialConfig::Landau => {
            let grid = cfg.grid.build()?;
            Ok(eigenstate_field(grid, &landau_spec(&cfg.landau)?, 0.0)?.field)
        }
        InitialConfig::Random { seed, max_k } => {
            random_antiperiodic(cfg.grid.build()?, *seed, *max_k)
        }
        InitialConfig::ModePacket { k, r0, width } => {
            let (k, r0, w) = (*k, *r0, *width);
            let grid = cfg.grid.build()?;
            let mut f = polar_dqw::field::sample_field(grid, SpinBasis::Polar, move |r, th| {
                let amp = (-(r - r0).powi(2) / (2.0 * w * w)).exp();
                let z = C64::from_polar(amp, k * th);
                Spinor::new(z, z)
            })?;
            f.normalize()?;
            Ok(f)
        }
    }
}

/// A free or coupled walk; step `s` starts at time `2ε·s`.
pub enum Stepper {
    Free(FreeWalk),
    Coupled(EmWalk),
}

impl Stepper {
    pub fn new(cfg: &RunConfig, grid: PolarGrid) -> HarnessResult<Self> {
        let params = cfg.walk.params()?;
        Ok(match build_potential(cfg, grid)? {
            None => Stepper::Free(FreeWalk::new(grid, &params)?),
            Some(pot) => Stepper::Coupled(
                EmWalk::new(grid, &params, pot)?.with_field_time(cfg.field_time.into()),
            ),
        })
    }

    pub fn step(&self, field: &mut SpinorField, s: usize) -> HarnessResult<()> {
        match self {
            Stepper::Free(w) => w.step(field)?,
            Stepper::Coupled(w) => w.step(field, 2.0 * field.grid().eps() * s as f64)?,
        }
        Ok(())
    }
}
