use polar_dqw::dump::save_field;
use polar_dqw::observables::Auditor;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::output::{ensure_dir, num, write_json, TaggedCsv, AUDIT_FORMAT};
use crate::setup::{initial_field, Stepper};

#[derive(Clone, Debug, Serialize)]
pub struct EvolveSummary {
    pub steps: usize,
    pub n_theta: usize,
    pub n_r: usize,
    pub dumps: Vec<String>,
    pub max_norm_drift: f64,
    pub max_j_drift: f64,
    pub max_even_mode_fraction: f64,
    pub max_mode_energy_step: f64,
}

pub fn dump_name(step: usize) -> String {
    format!("field_{step:06}.pdqw")
}

/// Run `steps` walk steps, writing dumps at the configured cadence, the final
/// field as `final.pdqw`, and a per-step conservation audit.
pub fn cmd_evolve(cfg: &RunConfig) -> HarnessResult<EvolveSummary> {
    cfg.validate()?;
    ensure_dir(&cfg.out_dir)?;
    let mut field = initial_field(cfg)?;
    let grid = *field.grid();
    let stepper = Stepper::new(cfg, grid)?;

    let mut audit = TaggedCsv::create(
        &cfg.out_dir.join("audit.csv"),
        AUDIT_FORMAT,
        &["step", "norm", "J_expectation", "even_mode_fraction"],
    )?;
    let mut auditor = Auditor::new(grid.n_theta());
    let mut dumps = Vec::new();
    for s in 0..=cfg.steps {
        if s > 0 {
            stepper.step(&mut field, s - 1)?;
        }
        let row = auditor.record(s, &field)?;
        audit.row(&[
            s.to_string(),
            num(row.norm),
            num(row.j_expectation),
            num(row.even_mode_fraction),
        ])?;
        if cfg.dump_every > 0 && s % cfg.dump_every == 0 {
            let name = dump_name(s);
            save_field(&cfg.out_dir.join(&name), &field)?;
            dumps.push(name);
        }
    }
    audit.finish()?;
    save_field(&cfg.out_dir.join("final.pdqw"), &field)?;
    dumps.push("final.pdqw".into());

    let report = auditor.finish();
    let summary = EvolveSummary {
        steps: cfg.steps,
        n_theta: grid.n_theta(),
        n_r: grid.n_r(),
        dumps,
        max_norm_drift: report.max_norm_drift,
        max_j_drift: report.max_j_drift,
        max_even_mode_fraction: report.max_even_mode_fraction,
        max_mode_energy_step: report.max_mode_energy_step,
    };
    write_json(&cfg.out_dir.join("evolve.json"), &summary)?;
    Ok(summary)
}
