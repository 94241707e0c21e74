//! Scenario files, trajectory output and the `paramech` subcommands.

pub mod audit_el;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;
pub mod scenario;

pub use error::CliError;
pub use scenario::{parse_scenario, Scenario};
