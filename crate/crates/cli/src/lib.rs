//! Configuration loading, sweeps and validation runs behind the `ris-v2v`
//! command-line tool.

pub mod config;
pub mod report;
pub mod run;

pub use config::{load_config, parse_config, ConfigError};
pub use report::{to_csv, Metric, ResultRow, CSV_HEADER};
pub use run::{
    run_point, run_sweep, sweep_rows, validate, SchemeSelection, SweepParam, SweepSpec,
    ValidationReport,
};
