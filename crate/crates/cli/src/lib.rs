//! Harness library behind the `latred` binary: configuration, file formats,
//! CSV output, timing, experiment sweeps, and runtime self-checks.

pub mod config;
pub mod csvout;
pub mod io;
pub mod metrics;
pub mod sweeps;
pub mod timing;
pub mod verify;
