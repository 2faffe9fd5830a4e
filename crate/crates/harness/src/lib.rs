//! Experiment harness for the polar Dirac quantum walk: configuration,
//! evolution runs, conservation audits, eigenstate and convergence studies,
//! and geometry verification. The `pdqw` binary is a thin CLI over this.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod setup;

pub use config::RunConfig;
pub use error::{ExitClass, HarnessError, HarnessResult};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "PDQW_THREADS";

/// Size the global worker pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> HarnessResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        HarnessError::config(
            "config.threads",
            format!("{THREADS_ENV}={raw:?} is not a positive integer"),
        )
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| HarnessError::config("config.threads", e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}
