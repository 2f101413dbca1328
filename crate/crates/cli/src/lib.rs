//! Workspace loading, command dispatch, reports and the randomized
//! verification harness behind the `purederive` binary.

pub mod commands;
pub mod encode;
pub mod harness;
pub mod report;
pub mod workspace;

pub use commands::{run, CliError, Command};
pub use harness::Suite;
pub use report::{Check, Format, Report};
pub use workspace::{HarnessConfig, LoadError, Workspace};
