//! Command-line front end for the `anisoperim` library.

pub mod commands;
pub mod error;
pub mod executor;
pub mod output;
pub mod spec;

pub use commands::{run, Cli};
pub use error::CliError;
pub use executor::RayonExecutor;
