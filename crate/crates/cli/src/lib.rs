//! Workbench files, subcommands and JSON reports over the nullity core.

pub mod commands;
pub mod workbench;

pub use commands::{run, Cli, Command, SCHEMA_VERSION};
pub use workbench::{LoadError, LoadErrorKind, Workbench};
