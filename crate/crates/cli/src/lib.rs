//! Command-line front end for the bat-algorithm benchmarks and the
//! dynamic-obstacle path planner.

pub mod commands;
pub mod config;
pub mod report;
pub mod svg;
pub mod trace;

pub use commands::{AlgoChoice, Options};
pub use config::{load_config, parse_config, Config, ConfigError};
