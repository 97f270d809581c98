//! Scenario files, the shipped catalog, sweeps, trace output and the
//! acceptance runner behind the `pursuit-sim` binary.

pub mod acceptance;
pub mod catalog;
pub mod run;
pub mod scenario;
pub mod svg;
pub mod sweep;
pub mod trace;

pub use run::{run_scenario, ExitCode, RunError, RunOutcome};
pub use scenario::{parse_scenario, parse_str, ConfigError, ScenarioConfig};
