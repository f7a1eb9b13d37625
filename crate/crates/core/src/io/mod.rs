//! Dataset ingestion, scenario configuration, result files and the command
//! line front end.

pub mod cli;
pub mod config;
pub mod data;
pub mod output;

pub use config::ScenarioConfig;
pub use data::{load_observed_series, ColumnMap};
pub use output::{write_field, write_timeseries};
