//! Command-line front end for `ecofire-core`.
//!
//! Every command writes a CSV table. Floats are printed with 17
//! significant digits, so identical inputs give byte-identical output.

pub mod args;
pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use args::Cli;
pub use config::{Command, Options, RunConfig};
pub use error::CliError;
pub use run::run;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ECOFIRE_OUT_DIR";
