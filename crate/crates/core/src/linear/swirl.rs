use std::sync::Arc;

use num_complex::Complex;

use super::green::GreenTable;
use super::Source;
use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialProfile};
use crate::scalar::{lit, Real};
use crate::special::KernelFamily;

pub(crate) fn swirl_with<T: Real>(
    t: &GreenTable<T>,
    grid: &Arc<RadialGrid<T>>,
    f: &Source<T>,
    g: Complex<T>,
) -> Result<RadialProfile<T>> {
    let [v0, v1, v2] = t.solve_dirichlet(grid, &f.values, f.decay, g)?;
    let mut p = RadialProfile::from_values(grid, v0).with_derivatives(v1, v2);
    p.decay_exponent = f.decay;
    Ok(p)
}

/// Nonzero swirl mode
///   v_{θ,k} = c𝒦_k + 𝒦_k∫₁^r f s^{1−ν}𝓘_k + 𝓘_k∫_r^∞ f s^{1−ν}𝒦_k,
/// with c fixed by v_{θ,k}(1) = g.
pub fn solve_swirl_mode<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    k: i64,
    nu: T,
    f: &Source<T>,
    g: Complex<T>,
) -> Result<RadialProfile<T>> {
    if let Some(p) = f.decay {
        if p <= lit(1.0) && !f.is_zero() {
            return Err(Error::NonIntegrableTail { exponent: crate::scalar::to_f64(p) });
        }
    }
    let t = GreenTable::bessel(grid, k, nu, KernelFamily::Swirl)?;
    swirl_with(&t, grid, f, g)
}
