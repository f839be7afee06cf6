//! Evaluation grids for time and resolvent parameters.
//!
//! Grid points are computed as `k * step` (never by accumulation) so that
//! identical parameters always produce bit-identical grids.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// `{0} ∪ {k * step : k = 1.., k * step <= t_max}`.
pub fn t_grid(t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("t step must be positive, got {step}")));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("t max must be nonnegative, got {t_max}")));
    }
    let count = math::floor(t_max / step + 1e-9) as usize;
    let mut grid = vec![0.0];
    grid.extend((1..=count).map(|k| k as f64 * step));
    Ok(grid)
}

/// `{omega + k * step : k = 1.., k * step <= span}` — strictly above `omega`.
pub fn lambda_grid(omega: f64, span: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda step must be positive, got {step}")));
    }
    if !(span >= step && span.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda span must be at least one step, got {span}"
        )));
    }
    let count = math::floor(span / step + 1e-9) as usize;
    Ok((1..=count).map(|k| omega + k as f64 * step).collect())
}

/// Default time grid: 0 to 5 in steps of 0.05.
pub fn default_t_grid() -> Vec<f64> {
    t_grid(5.0, 0.05).expect("default grid parameters are valid")
}

/// Default resolvent grid: `omega + 0.1` to `omega + 10` in steps of 0.1.
pub fn default_lambda_grid(omega: f64) -> Vec<f64> {
    lambda_grid(omega, 10.0, 0.1).expect("default grid parameters are valid")
}
