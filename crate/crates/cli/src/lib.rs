//! Command-line front end: scenario configuration, the solve, sweep,
//! validate and export pipelines, and versioned CSV/JSON output.
//!
//! Exit codes: 0 ok, 1 configuration or i/o error, 2 a leaf did not
//! converge, 3 an invariant check failed.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod validate;

pub use commands::{Command, Manifest, RunOutcome, Runner};
pub use config::ScenarioConfig;
pub use error::CliError;
