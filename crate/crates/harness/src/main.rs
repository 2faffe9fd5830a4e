use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polar_dqw_harness::commands::geometry::MetricChoice;
use polar_dqw_harness::commands::{
    cmd_convergence, cmd_evolve, cmd_geometry_verify, cmd_landau_check, cmd_momentum_audit,
};
use polar_dqw_harness::config::{
    BoundaryChoice, FieldTimeChoice, InitialConfig, PotentialConfig, TauChoice,
};
use polar_dqw_harness::{init_threads, HarnessError, HarnessResult, RunConfig};

/// Polar Dirac quantum walk experiments.
///
/// Settings come from an optional JSON config; each flag overrides the
/// config key of the same name. Thread count is read from PDQW_THREADS.
/// Exit status: 0 ok, 2 config error, 3 numeric tolerance failure, 4 I/O error.
#[derive(Parser)]
#[command(name = "pdqw", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the walk, writing field dumps and a conservation audit.
    Evolve,
    /// One eigenstate step per resolution; discretization error table and fit.
    Convergence,
    /// Eigenstate diagnostics: angular momentum, fidelity, residuals, normalization.
    LandauCheck,
    /// Angular-momentum audit of dump files, or of a configured run if none given.
    MomentumAudit { dumps: Vec<PathBuf> },
    /// Connection coefficients against closed forms and structural identities.
    GeometryVerify {
        #[arg(long, value_enum, default_value = "polar")]
        metric: MetricChoice,
    },
    /// Print the effective configuration as JSON.
    PrintConfig,
}

#[derive(Args)]
struct Overrides {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n_theta: Option<usize>,
    #[arg(long, global = true)]
    r_min: Option<f64>,
    /// Radial count; replaces r_max.
    #[arg(long, global = true)]
    n_r: Option<usize>,
    /// Radial extent; replaces n_r.
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    #[arg(long, value_enum, global = true)]
    boundary: Option<BoundaryChoice>,
    /// Uniform magnetic field strength; selects the uniform-b potential.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Per-site potential CSV; selects the table potential.
    #[arg(long, global = true)]
    potential_table: Option<PathBuf>,
    /// Drop any configured potential.
    #[arg(long, global = true)]
    no_potential: bool,
    /// Start from the configured Landau eigenstate.
    #[arg(long, global = true)]
    init_landau: bool,
    /// Start from a random anti-periodic field with this seed.
    #[arg(long, global = true)]
    init_random: Option<u64>,
    /// Mode cutoff for --init-random.
    #[arg(long, global = true, default_value_t = 8.5)]
    max_k: f64,
    /// Start from a field dump.
    #[arg(long, global = true)]
    init_dump: Option<PathBuf>,
    #[arg(long, global = true)]
    landau_n: Option<i64>,
    #[arg(long, global = true)]
    landau_alpha: Option<i64>,
    #[arg(long, global = true)]
    landau_beta: Option<f64>,
    #[arg(long, global = true)]
    landau_mass: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    dump_every: Option<usize>,
    /// Output directory.
    #[arg(long = "out", global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    tau: Option<TauChoice>,
    #[arg(long, value_enum, global = true)]
    field_time: Option<FieldTimeChoice>,
    /// Comma-separated angular resolutions for the convergence sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    n_thetas: Option<Vec<usize>>,
    #[arg(long, global = true)]
    min_slope: Option<f64>,
    #[arg(long, global = true)]
    no_massless_sweep: bool,
    /// Record wall-clock runtimes (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

impl Overrides {
    fn apply(self) -> HarnessResult<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.n_theta {
            c.grid.n_theta = v;
        }
        if let Some(v) = self.r_min {
            c.grid.r_min = v;
        }
        if let Some(v) = self.n_r {
            c.grid.n_r = Some(v);
            c.grid.r_max = None;
        }
        if let Some(v) = self.r_max {
            c.grid.r_max = Some(v);
            c.grid.n_r = None;
        }
        if let Some(v) = self.mass {
            c.walk.mass = v;
        }
        if let Some(v) = self.boundary {
            c.walk.boundary = v;
        }
        let potential_flags = [
            self.beta.is_some(),
            self.potential_table.is_some(),
            self.no_potential,
        ];
        if potential_flags.iter().filter(|f| **f).count() > 1 {
            return Err(HarnessError::config(
                "config.flags",
                "choose one of --beta, --potential-table, --no-potential",
            ));
        }
        if let Some(beta) = self.beta {
            c.potential = PotentialConfig::UniformB { beta };
        }
        if let Some(path) = self.potential_table {
            c.potential = PotentialConfig::Table { path };
        }
        if self.no_potential {
            c.potential = PotentialConfig::None;
        }
        let init_flags = [
            self.init_landau,
            self.init_random.is_some(),
            self.init_dump.is_some(),
        ];
        if init_flags.iter().filter(|f| **f).count() > 1 {
            return Err(HarnessError::config(
                "config.flags",
                "choose one of --init-landau, --init-random, --init-dump",
            ));
        }
        if self.init_landau {
            c.initial = InitialConfig::Landau;
        }
        if let Some(seed) = self.init_random {
            c.initial = InitialConfig::Random {
                seed,
                max_k: self.max_k,
            };
        }
        if let Some(path) = self.init_dump {
            c.initial = InitialConfig::Dump { path };
        }
        if let Some(v) = self.landau_n {
            c.landau.n = v;
        }
        if let Some(v) = self.landau_alpha {
            c.landau.alpha = v;
        }
        if let Some(v) = self.landau_beta {
            c.landau.beta = v;
        }
        if let Some(v) = self.landau_mass {
            c.landau.mass = v;
        }
        if let Some(v) = self.steps {
            c.steps = v;
        }
        if let Some(v) = self.dump_every {
            c.dump_every = v;
        }
        if let Some(v) = self.out_dir {
            c.out_dir = v;
        }
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if let Some(v) = self.field_time {
            c.field_time = v;
        }
        if let Some(v) = self.n_thetas {
            c.convergence.n_thetas = v;
        }
        if let Some(v) = self.min_slope {
            c.convergence.min_slope = v;
        }
        if self.no_massless_sweep {
            c.convergence.massless_sweep = false;
        }
        if self.timing {
            c.timing = true;
        }
        Ok(c)
    }
}

fn tolerance_failure(what: &str) -> HarnessError {
    HarnessError::numeric(
        "numeric.tolerance",
        format!("{what} failed; see report in output directory"),
    )
}

fn run(cli: Cli) -> HarnessResult<()> {
    init_threads()?;
    let cfg = cli.overrides.apply()?;
    match cli.command {
        Command::PrintConfig => println!("{}", serde_json::to_string_pretty(&cfg)?),
        Command::Evolve => {
            let s = cmd_evolve(&cfg)?;
            println!(
                "evolve: steps={} norm_drift={:e} j_drift={:e} even_fraction={:e} dumps={}",
                s.steps,
                s.max_norm_drift,
                s.max_j_drift,
                s.max_even_mode_fraction,
                s.dumps.len()
            );
        }
        Command::Convergence => {
            let r = cmd_convergence(&cfg)?;
            for row in &r.primary.rows {
                println!(
                    "n_theta={:4} eps={:.6} delta={:.6e} fidelity_deviation={:.6e}",
                    row.n_theta, row.eps, row.delta, row.fidelity_deviation
                );
            }
            println!(
                "slope={:.4} decreasing={} passed={}",
                r.primary.slope, r.primary.delta_strictly_decreasing, r.passed
            );
            if !r.passed {
                return Err(tolerance_failure("convergence"));
            }
        }
        Command::LandauCheck => {
            let r = cmd_landau_check(&cfg)?;
            println!(
                "landau-check: J={} (kappa {}) fidelity={:.12} residual={:e} quadrature={:.9} even_fraction={:e} passed={}",
                r.angular_momentum, r.kappa, r.fidelity, r.max_residual, r.normalization_quadrature,
                r.even_mode_fraction_after_steps, r.passed
            );
            if !r.passed {
                return Err(tolerance_failure("landau-check"));
            }
        }
        Command::MomentumAudit { dumps } => {
            let r = cmd_momentum_audit(&cfg, &dumps)?;
            println!(
                "momentum-audit: snapshots={} norm_drift={:e} j_drift={:e} mode_energy_step={:e} decomposition_gap={:e}",
                r.snapshots, r.max_norm_drift, r.max_j_drift, r.max_mode_energy_step, r.max_decomposition_gap
            );
        }
        Command::GeometryVerify { metric } => {
            let r = cmd_geometry_verify(&cfg, metric)?;
            println!(
                "geometry-verify: checks={} walk_angle_deviation={:e} passed={}",
                r.checks.len(),
                r.walk_angle_max_deviation,
                r.passed
            );
            for f in &r.failures {
                println!("  FAIL {f}");
            }
            if !r.passed {
                return Err(tolerance_failure("geometry-verify"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
