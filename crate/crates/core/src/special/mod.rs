//! Modified Bessel functions of real order and the mode kernels built on them.

mod ik;
mod kernel;

pub use kernel::{kernel_i, kernel_k, kernel_pair, KernelFamily, KernelValue};

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};
pub(crate) use ik::bessel_ik_scaled;

/// Nonnegative real order α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselOrder<T> {
    alpha: T,
}

impl<T: Real> BesselOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha < T::zero() {
            return Err(Error::Domain(format!(
                "Bessel order must be finite and nonnegative, got {}",
                to_f64(alpha)
            )));
        }
        Ok(Self { alpha })
    }

    /// |1 + ν/2|
    pub fn swirl(nu: T) -> Self {
        Self { alpha: (T::one() + nu / (T::one() + T::one())).abs() }
    }

    /// |1 − ν/2|
    pub fn vorticity(nu: T) -> Self {
        Self { alpha: (T::one() - nu / (T::one() + T::one())).abs() }
    }

    pub fn stream() -> Self {
        Self { alpha: T::one() }
    }

    pub fn alpha(self) -> T {
        self.alpha
    }

    pub fn raised(self) -> Self {
        Self { alpha: self.alpha + T::one() }
    }
}

/// A value stored as `mantissa · e^{exp_shift}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledBesselValue<T> {
    pub mantissa: T,
    pub exp_shift: T,
}

impl<T: Real> ScaledBesselValue<T> {
    pub fn value(self) -> T {
        self.mantissa * self.exp_shift.exp()
    }

    /// Value multiplied by `e^{extra}` without forming either exponential alone.
    pub fn value_times_exp(self, extra: T) -> T {
        self.mantissa * (self.exp_shift + extra).exp()
    }
}

fn check_argument<T: Real>(x: T) -> Result<()> {
    if !x.is_finite() || x <= T::zero() {
        return Err(Error::Domain(format!(
            "Bessel argument must be positive and finite, got {}",
            to_f64(x)
        )));
    }
    Ok(())
}

/// I_α(x), returned as `(I_α(x)e^{−x}, x)`.
pub fn bessel_i<T: Real>(order: BesselOrder<T>, x: T) -> Result<ScaledBesselValue<T>> {
    check_argument(x)?;
    let v = bessel_ik_scaled(order.alpha, x);
    Ok(ScaledBesselValue { mantissa: v.i, exp_shift: x })
}

/// K_α(x), returned as `(K_α(x)e^{x}, −x)`.
pub fn bessel_k<T: Real>(order: BesselOrder<T>, x: T) -> Result<ScaledBesselValue<T>> {
    check_argument(x)?;
    let v = bessel_ik_scaled(order.alpha, x);
    Ok(ScaledBesselValue { mantissa: v.k, exp_shift: -x })
}

/// dI_α/dx = (α/x)I_α + I_{α+1}
pub fn bessel_i_prime<T: Real>(order: BesselOrder<T>, x: T) -> Result<ScaledBesselValue<T>> {
    let a = bessel_i(order, x)?;
    let b = bessel_i(order.raised(), x)?;
    Ok(ScaledBesselValue {
        mantissa: order.alpha / x * a.mantissa + b.mantissa,
        exp_shift: x,
    })
}

/// dK_α/dx = (α/x)K_α − K_{α+1}
pub fn bessel_k_prime<T: Real>(order: BesselOrder<T>, x: T) -> Result<ScaledBesselValue<T>> {
    let a = bessel_k(order, x)?;
    let b = bessel_k(order.raised(), x)?;
    Ok(ScaledBesselValue {
        mantissa: order.alpha / x * a.mantissa - b.mantissa,
        exp_shift: -x,
    })
}
