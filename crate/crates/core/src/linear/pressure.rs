//! Pressure modes from solved velocity modes. Pressure never enters the
//! solvers; it is recovered afterwards from the momentum equations.

use std::sync::Arc;

use super::Source;
use crate::error::{Error, Result};
use crate::radial::{ExpQuadrature, RadialGrid, RadialProfile};
use crate::scalar::{ik, int, to_f64, Real};

/// π_k for k ≠ 0 from the z-equation:
///   ikπ_k = f̄_{z,k} + v_z″ + (1−ν)/r·v_z′ − k²v_z.
pub fn recover_pressure<T: Real>(
    k: i64,
    nu: T,
    v_z: &RadialProfile<T>,
    f_z: &Source<T>,
) -> Result<RadialProfile<T>> {
    if k == 0 {
        return Err(Error::Domain("zero-mode pressure uses recover_pressure_zero".into()));
    }
    if f_z.values.len() != v_z.len() {
        return Err(Error::GridMismatch("pressure forcing length differs from grid".into()));
    }
    let (d1, d2) = (v_z.d1()?, v_z.d2()?);
    let r = v_z.grid.nodes();
    let ikc = ik::<T>(k);
    let k2 = int::<T>(k * k);
    let a = T::one() - nu;
    let values = (0..r.len())
        .map(|i| (f_z.values[i] + d2[i] + d1[i] * (a / r[i]) - v_z.values[i] * k2) / ikc)
        .collect();
    Ok(RadialProfile::from_values(&v_z.grid, values))
}

/// π_0 from the r-equation with v_{r,0} ≡ 0: π_0′ = f̄_{r,0}, π_0(∞) = 0.
/// `f_r0` is the forcing absorbed into the zero-mode pressure.
pub fn recover_pressure_zero<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    f_r0: &Source<T>,
) -> Result<RadialProfile<T>> {
    if f_r0.values.len() != grid.len() {
        return Err(Error::GridMismatch("pressure forcing length differs from grid".into()));
    }
    if let Some(p) = f_r0.decay {
        if p <= T::one() && !f_r0.is_zero() {
            return Err(Error::NonIntegrableTail { exponent: to_f64(p) });
        }
    }
    let q = ExpQuadrature::new(grid, T::zero()).cumulative_outer_closed(grid, &f_r0.values, f_r0.decay)?;
    let values = q.into_iter().map(|v| -v).collect();
    Ok(RadialProfile::from_values(grid, values).with_derivatives(
        f_r0.values.clone(),
        crate::radial::DiffOperator::new(grid).first(&f_r0.values),
    ))
}
