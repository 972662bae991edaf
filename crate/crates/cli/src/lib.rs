//! Subcommands, configuration and artifact writers behind the `rauzy` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

pub use config::{Config, Setup};
pub use error::{CliError, CliResult};
