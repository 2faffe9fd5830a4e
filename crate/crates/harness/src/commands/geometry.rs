use polar_dqw::geometry::{
    basis_change_generator, check_polar_closed_forms, check_structure, check_vanishing,
    spin_connection, verify_walk_angles, GeometryCheck, MetricSpec, GEOMETRY_TOL, WALK_ANGLE_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::HarnessResult;
use crate::output::{ensure_dir, write_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MetricChoice {
    /// `diag(1, −1, −r²)`, compared against its closed forms.
    Polar,
    /// `diag(1, −1, −1)`, every connection quantity must vanish.
    Flat,
    /// `diag(1, −1, −r³)`, a deliberately wrong metric checked against the
    /// polar closed forms.
    PolarCubic,
}

pub const CHECK_RADII: [f64; 3] = [1.5, 2.0, 5.0];
const WALK_ANGLE_SAMPLES: usize = 991;
const RANDOM_METRICS: usize = 8;
const METRIC_SEED: u64 = 0x6d65_7472_6963;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub quantity: String,
    pub metric: String,
    pub point: [f64; 3],
    pub expected: f64,
    pub actual: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<GeometryCheck> for CheckRecord {
    fn from(c: GeometryCheck) -> Self {
        CheckRecord {
            quantity: c.quantity,
            metric: c.metric,
            point: c.point,
            expected: c.expected,
            actual: c.actual,
            deviation: c.deviation,
            tolerance: c.tolerance,
            passed: c.passed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryReport {
    pub metric: MetricChoice,
    pub checks: Vec<CheckRecord>,
    pub walk_angle_max_deviation: f64,
    pub walk_angle_samples: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn random_metrics() -> Vec<MetricSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(METRIC_SEED);
    (0..RANDOM_METRICS)
        .map(|_| MetricSpec::smooth_diagonal(std::array::from_fn(|_| rng.random::<f64>() - 0.5)))
        .collect()
}

/// Radii `1 ..= 100` on an even grid.
pub fn walk_angle_radii() -> Vec<f64> {
    (0..WALK_ANGLE_SAMPLES)
        .map(|i| 1.0 + 99.0 * i as f64 / (WALK_ANGLE_SAMPLES - 1) as f64)
        .collect()
}

pub fn cmd_geometry_verify(cfg: &RunConfig, choice: MetricChoice) -> HarnessResult<GeometryReport> {
    ensure_dir(&cfg.out_dir)?;
    let metric = match choice {
        MetricChoice::Polar => MetricSpec::polar(),
        MetricChoice::Flat => MetricSpec::flat(),
        MetricChoice::PolarCubic => MetricSpec::new("polar-cubic", |x| [1.0, -1.0, -x[1].powi(3)]),
    };
    let mut checks: Vec<GeometryCheck> = Vec::new();
    for r in CHECK_RADII {
        match choice {
            MetricChoice::Flat => checks.extend(check_vanishing(&metric, [0.0, r, 0.3])?),
            _ => checks.extend(check_polar_closed_forms(&metric, r)?),
        }
        checks.extend(check_structure(&metric, [0.0, r, 0.3])?);
    }
    if choice == MetricChoice::Polar {
        // the spin connection is the generator of the spin-frame rotation
        let gamma_theta = spin_connection(&metric, [0.0, 2.0, 0.0])?[2];
        for th in [0.0, 1.0, 2.5, 4.0] {
            let dev = basis_change_generator(th).max_abs_diff(&gamma_theta);
            checks.push(GeometryCheck {
                quantity: "dM/dθ M^-1 vs SpinConnection_θ".into(),
                metric: metric.name().into(),
                point: [0.0, 2.0, th],
                expected: 0.0,
                actual: dev,
                deviation: dev,
                tolerance: GEOMETRY_TOL,
                passed: dev <= GEOMETRY_TOL,
            });
        }
    }
    for (i, m) in random_metrics().iter().enumerate() {
        let x = [0.1 * i as f64, 1.5 + 0.7 * i as f64, 0.4 * i as f64];
        checks.extend(check_structure(m, x)?);
    }

    let mut walk_angle_max_deviation: f64 = 0.0;
    let mut failures = Vec::new();
    for r in walk_angle_radii() {
        match verify_walk_angles(r) {
            Ok(rep) => walk_angle_max_deviation = walk_angle_max_deviation.max(rep.max_deviation),
            Err(e) => failures.push(format!("walk angles at r={r}: {e}")),
        }
    }
    if walk_angle_max_deviation >= WALK_ANGLE_TOL {
        failures.push(format!("walk angle deviation {walk_angle_max_deviation:e}"));
    }
    failures.extend(checks.iter().filter(|c| !c.passed).map(|c| {
        format!(
            "{} [{}] at r={}: expected {}, got {}",
            c.quantity, c.metric, c.point[1], c.expected, c.actual
        )
    }));
    let report = GeometryReport {
        metric: choice,
        passed: failures.is_empty(),
        checks: checks.into_iter().map(CheckRecord::from).collect(),
        walk_angle_max_deviation,
        walk_angle_samples: WALK_ANGLE_SAMPLES,
        failures,
    };
    write_json(&cfg.out_dir.join("geometry.json"), &report)?;
    Ok(report)
}
