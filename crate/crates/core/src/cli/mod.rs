//! Command-line layer: configuration, loss-file ingestion and reports.

pub mod commands;
pub mod config;
pub mod ingest;
pub mod report;

pub use commands::{cmd_calibrate, cmd_fit, cmd_qq, cmd_simulate, execute, Command};
pub use config::{Format, Overrides, RunConfig};
pub use report::{Cell, Report};

/// Environment variable that sets the simulation worker count.
pub const WORKERS_ENV: &str = "LTRC_WORKERS";

/// Worker count from `LTRC_WORKERS`, else the available parallelism.
pub fn workers_from_env() -> crate::Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| crate::Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}
