//! Sweep metrics.

use anyhow::{bail, Result};

/// Relative error `|exact - approx| / |exact|`. A zero reference value has
/// no defined relative error; such configurations are excluded from
/// minimization sweeps.
pub fn relative_error(exact: f64, approx: f64) -> Result<f64> {
    if exact == 0.0 {
        bail!("relative error undefined: reference optimum is zero");
    }
    Ok((exact - approx).abs() / exact.abs())
}
