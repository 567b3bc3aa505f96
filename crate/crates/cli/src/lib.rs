//! Command implementations behind the `selfaffine` binary. Every command is a
//! pure function of its arguments and a [`RunConfig`].

pub mod commands;
pub mod config;
pub mod error;
pub mod record;
pub mod sweep;

pub use config::RunConfig;
pub use error::CliError;
pub use record::Record;
