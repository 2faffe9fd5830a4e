use std::path::PathBuf;

use polar_dqw::dump::load_field;
use polar_dqw::observables::{orbital_spin_decomposition, Auditor};
use polar_dqw::SpinorField;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{HarnessError, HarnessResult};
use crate::output::{ensure_dir, num, write_json, TaggedCsv, MOMENTUM_FORMAT};
use crate::setup::{initial_field, Stepper};

#[derive(Clone, Debug, Serialize)]
pub struct MomentumAuditReport {
    pub format: &'static str,
    pub snapshots: usize,
    pub max_norm_drift: f64,
    pub max_j_drift: f64,
    pub max_mode_energy_step: f64,
    pub max_even_mode_fraction: f64,
    /// `max |⟨Ĵ⟩ − (orbital + spin)|` over snapshots.
    pub max_decomposition_gap: f64,
}

/// Audit the given dumps in order, or, when none are given, the snapshots of
/// an in-memory run of the configured evolution.
pub fn cmd_momentum_audit(
    cfg: &RunConfig,
    dumps: &[PathBuf],
) -> HarnessResult<MomentumAuditReport> {
    ensure_dir(&cfg.out_dir)?;
    let snapshots: Vec<SpinorField> = if dumps.is_empty() {
        cfg.validate()?;
        let mut field = initial_field(cfg)?;
        let stepper = Stepper::new(cfg, *field.grid())?;
        let mut out = vec![field.clone()];
        for s in 0..cfg.steps {
            stepper.step(&mut field, s)?;
            out.push(field.clone());
        }
        out
    } else {
        dumps
            .iter()
            .map(|p| load_field(p).map_err(HarnessError::from))
            .collect::<HarnessResult<_>>()?
    };
    let grid = *snapshots[0].grid();
    if snapshots.iter().any(|f| *f.grid() != grid) {
        return Err(HarnessError::config(
            "config.grid_mismatch",
            "dumps are on different grids",
        ));
    }

    let mut csv = TaggedCsv::create(
        &cfg.out_dir.join("momentum_audit.csv"),
        MOMENTUM_FORMAT,
        &[
            "index",
            "norm",
            "J_expectation",
            "orbital",
            "spin",
            "even_mode_fraction",
        ],
    )?;
    let mut auditor = Auditor::new(grid.n_theta());
    let mut gap: f64 = 0.0;
    for (i, f) in snapshots.iter().enumerate() {
        let row = auditor.record(i, f)?.clone();
        let split = orbital_spin_decomposition(f)?;
        gap = gap.max((row.j_expectation - split.total()).abs());
        csv.row(&[
            i.to_string(),
            num(row.norm),
            num(row.j_expectation),
            num(split.orbital),
            num(split.spin),
            num(row.even_mode_fraction),
        ])?;
    }
    csv.finish()?;
    let audit = auditor.finish();
    let report = MomentumAuditReport {
        format: MOMENTUM_FORMAT,
        snapshots: snapshots.len(),
        max_norm_drift: audit.max_norm_drift,
        max_j_drift: audit.max_j_drift,
        max_mode_energy_step: audit.max_mode_energy_step,
        max_even_mode_fraction: audit.max_even_mode_fraction,
        max_decomposition_gap: gap,
    };
    write_json(&cfg.out_dir.join("momentum_audit.json"), &report)?;
    Ok(report)
}
