//! Decay index τ of the solution space.

use crate::error::{Error, Result};
use crate::fourier::{sigma_regime, DecayExponents};
use crate::scalar::{int, lit, to_f64, Real};

/// τ with the effective exponents it was built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauInfo<T> {
    pub tau: T,
    /// λ̄_θ: λ_θ for ν ≥ −2, min{λ_θ, 2 − ν/2} for ν < −2.
    pub lambda_bar_theta: T,
    /// λ̄_z = min{λ_z, 2 − ν/2}.
    pub lambda_bar_z: T,
}

/// τ = min{λ̄_θ − 3, λ̄_z − 2, λ − 3/2}.
pub fn compute_tau<T: Real>(nu: T, lambda_theta: T, lambda_z: T, lambda: T) -> Result<TauInfo<T>> {
    if !(nu < T::zero()) {
        return Err(Error::Config(format!("ν < 0 required, got {}", to_f64(nu))));
    }
    let cap = int::<T>(2) - nu * lit(0.5);
    let lambda_bar_theta = if sigma_regime(nu) { lambda_theta } else { lambda_theta.min(cap) };
    let lambda_bar_z = lambda_z.min(cap);
    let tau = (lambda_bar_theta - int(3)).min(lambda_bar_z - int(2)).min(lambda - lit(1.5));
    if !(tau > T::zero()) {
        return Err(Error::Config(format!(
            "decay index τ = {} must be positive (λ_θ > 3, λ_z > 2, λ > 3/2 required)",
            to_f64(tau)
        )));
    }
    Ok(TauInfo { tau, lambda_bar_theta, lambda_bar_z })
}

pub fn compute_tau_for<T: Real>(nu: T, lam: &DecayExponents<T>) -> Result<TauInfo<T>> {
    compute_tau(nu, lam.lambda_theta, lam.lambda_z, lam.lambda)
}
