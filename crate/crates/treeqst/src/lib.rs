//! Configuration, sweeps, verification suites and file formats on top of
//! `treeqst-core`.
//!
//! A run is described by a [`RunConfig`], built from defaults, an optional
//! preset, an optional `key = value` file and command-line overrides.
//! [`run`] turns it into a [`Table`] with one row per `(t, p)` pair and
//! [`emit`] writes that table as CSV or JSON. `--mode verify` instead runs
//! [`run_verification`], which compares every closed form against an
//! independent oracle.

pub mod config;
pub mod emit;
mod error;
pub mod oracle;
pub mod sweep;
pub mod verify;

pub use crate::config::{ConfigLayer, Format, Mode, Preset, RunConfig};
pub use crate::emit::{emit, render};
pub use crate::error::{CliError, Result};
pub use crate::sweep::{run, Table};
pub use crate::verify::{run_verification, VerifyReport};
