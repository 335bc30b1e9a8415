//! Configuration-driven scenario runner on top of `otoc-core`.
//!
//! [`parse_config`] turns a TOML experiment description into a
//! [`ScenarioConfig`], [`run_scenario`] executes it on a worker pool, and
//! [`write_csv`] renders the result.

#![warn(rust_2018_idioms, unused_qualifications)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;
pub mod validate;

pub use config::{parse_config, parse_config_with, Overrides, Scenario, ScenarioConfig};
pub use error::SimError;
pub use output::{write_csv, Check, RunResult};
pub use scenarios::{run_scenario, DIMENSION_BUDGET};
