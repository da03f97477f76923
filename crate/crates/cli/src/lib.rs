//! Scenario files, batch certification runs and report output for
//! `formbound`.

pub mod catalog;
pub mod config;
pub mod error;
pub mod export;
pub mod expr;
pub mod report;
pub mod scenario;

pub use config::ScenarioConfig;
pub use error::{ConfigError, OutputError};
pub use export::{emit_pointwise_csv, midpoint_grid, CsvField};
pub use report::{run, DirectionChoice, RunOptions, RunReport, Verdict};
pub use scenario::{load_scenario, Scenario};

/// Environment variable naming the default directory for reports.
pub const OUT_DIR_ENV: &str = "CERTIFY_OUT_DIR";
