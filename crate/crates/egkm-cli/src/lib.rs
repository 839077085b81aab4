//! Harness around the `egkm` library: dataset manifests, the repeated-runs
//! benchmark protocol, report rendering, pipeline walk-throughs, and bundled
//! fixture generation. The `egkm` binary is a thin argument layer over this.

pub mod emit;
mod error;
pub mod experiment;
pub mod explain;
pub mod fixtures;
pub mod manifest;

pub use crate::error::CliError;
