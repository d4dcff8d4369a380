//! Decay-exponent fits over the far field.

use crate::error::Result;
use crate::radial::{loglog_fit, RadialProfile};
use crate::scalar::Real;

/// Least-squares slope of log|v| against log r and its R².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit<T> {
    pub exponent: T,
    pub r_squared: T,
}

/// Fit over the last decade [R_max/10, R_max].
pub fn decay_fit<T: Real>(p: &RadialProfile<T>) -> Result<DecayFit<T>> {
    let r_hi = p.grid.r_max();
    let r_lo = p.grid.nodes()[p.grid.last_decade_start()];
    decay_fit_window(p, r_lo, r_hi)
}

/// Fit over nodes in [r_lo, r_hi].
pub fn decay_fit_window<T: Real>(p: &RadialProfile<T>, r_lo: T, r_hi: T) -> Result<DecayFit<T>> {
    let (exponent, r_squared) = loglog_fit(&p.grid, &p.values, r_lo, r_hi)?;
    Ok(DecayFit { exponent, r_squared })
}
