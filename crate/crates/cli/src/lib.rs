//! Scenario files and the `qtrans` command line.

pub mod commands;
pub mod report;
pub mod scenario;
pub mod world;

pub use commands::{
    run, Cli, Command, Outcome, EXIT_INVALID, EXIT_OK, EXIT_STATISTICAL, EXIT_UNDEFINED, EXIT_USAGE,
};
