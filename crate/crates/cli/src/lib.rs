//! File formats, run manifests, parallel verification and the `dsrg`
//! command-line front end for `dsrg-core`.

pub mod catalog;
pub mod commands;
pub mod format;
pub mod manifest;
pub mod parallel;

pub use commands::{run, Cli, ExitStatus};
