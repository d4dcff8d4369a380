use std::sync::Arc;

use num_complex::Complex;

use super::green::GreenTable;
use super::Source;
use crate::error::{Error, Result};
use crate::fourier::sigma_regime;
use crate::radial::{ExpQuadrature, RadialGrid, RadialProfile};
use crate::scalar::{creal, int, to_f64, Real};

/// Zero-mode swirl v_{θ,0} = v + σ/r; σ only exists for −2 ≤ ν < 0.
#[derive(Clone, Debug)]
pub struct ZeroModeSwirlSolution<T> {
    pub v_regular: RadialProfile<T>,
    pub sigma: Option<T>,
}

impl<T: Real> ZeroModeSwirlSolution<T> {
    /// v + σ/r at node i.
    pub fn full_value(&self, i: usize) -> Complex<T> {
        let r = self.v_regular.grid.nodes()[i];
        self.v_regular.values[i] + creal(self.sigma.unwrap_or(T::zero()) / r)
    }
}

fn check_nu<T: Real>(nu: T) -> Result<()> {
    if !(nu < T::zero()) || !nu.is_finite() {
        return Err(Error::Domain(format!("ν < 0 required, got {}", to_f64(nu))));
    }
    Ok(())
}

fn check_len<T: Real>(grid: &RadialGrid<T>, f: &Source<T>) -> Result<()> {
    if f.values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "forcing has {} samples, grid has {} nodes",
            f.values.len(),
            grid.len()
        )));
    }
    Ok(())
}

/// The Euler kernels lose two powers of r; slower forcing has no decaying solution.
fn check_decay<T: Real>(f: &Source<T>, need: T) -> Result<()> {
    match f.decay {
        Some(p) if p <= need && !f.is_zero() => {
            Err(Error::NonIntegrableTail { exponent: to_f64(p) })
        }
        _ => Ok(()),
    }
}

/// Kernels for the zero-mode swirl equation
///   −(v″ + (1−ν)/r·v′ − (1+ν)/r²·v) = f,
/// whose homogeneous solutions are r^{1+ν} and r^{−1}.
pub(crate) enum ZeroSwirlKernel<T> {
    /// ν < −2: D = r^{1+ν}, G = r^{−1}, ρ = r^{1−ν}, C = −(ν+2).
    Green(GreenTable<T>),
    /// −2 ≤ ν < 0: nested outer integrals, σ carries the 1/r part.
    Nested(ExpQuadrature<T>),
}

impl<T: Real> ZeroSwirlKernel<T> {
    pub fn new(grid: &RadialGrid<T>, nu: T) -> Self {
        if sigma_regime(nu) {
            ZeroSwirlKernel::Nested(ExpQuadrature::new(grid, T::zero()))
        } else {
            ZeroSwirlKernel::Green(GreenTable::euler(grid, T::one() + nu, -T::one(), T::one() - nu))
        }
    }
}

pub(crate) fn zero_swirl_with<T: Real>(
    kernel: &ZeroSwirlKernel<T>,
    grid: &Arc<RadialGrid<T>>,
    nu: T,
    f: &Source<T>,
    g: T,
) -> Result<ZeroModeSwirlSolution<T>> {
    check_len(grid, f)?;
    let r = grid.nodes();
    match kernel {
        ZeroSwirlKernel::Green(t) => {
            let v = t.solve_dirichlet(grid, &f.values, f.decay, creal(g))?;
            let [v0, v1, v2] = v;
            let mut p = RadialProfile::from_values(grid, v0).with_derivatives(v1, v2);
            p.decay_exponent = Some(-(T::one() + nu));
            Ok(ZeroModeSwirlSolution { v_regular: p, sigma: None })
        }
        ZeroSwirlKernel::Nested(q) => {
            // Φ(s) = ∫_s^∞ t^{−ν}f dt,  Ψ(r) = ∫_r^∞ s^{1+ν}Φ ds
            let a: Vec<_> = r.iter().zip(&f.values).map(|(&s, &v)| v * s.powf(-nu)).collect();
            let phi = q.cumulative_outer_closed(grid, &a, f.decay.map(|p| p + nu))?;
            let b: Vec<_> = r.iter().zip(&phi).map(|(&s, &v)| v * s.powf(T::one() + nu)).collect();
            let psi = q.cumulative_outer_closed(grid, &b, f.decay.map(|p| p - int(2)))?;
            let one = T::one();
            let two = int::<T>(2);
            let mut v0 = Vec::with_capacity(r.len());
            let mut v1 = Vec::with_capacity(r.len());
            let mut v2 = Vec::with_capacity(r.len());
            for i in 0..r.len() {
                let x = r[i];
                let rn = x.powf(nu);
                v0.push(-psi[i] / x);
                v1.push(psi[i] / (x * x) + phi[i] * rn);
                v2.push(-psi[i] * (two / (x * x * x)) + phi[i] * ((nu - one) * rn / x) - f.values[i]);
            }
            let sigma = (psi[0] + creal(g)).re;
            let p = RadialProfile::from_values(grid, v0).with_derivatives(v1, v2);
            Ok(ZeroModeSwirlSolution { v_regular: p, sigma: Some(sigma) })
        }
    }
}

/// Zero-mode swirl with v_{θ,0}(1) = g and decay at infinity.
pub fn solve_zero_swirl<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    nu: T,
    f: &Source<T>,
    g: T,
) -> Result<ZeroModeSwirlSolution<T>> {
    check_nu(nu)?;
    check_decay(f, int(3))?;
    zero_swirl_with(&ZeroSwirlKernel::new(grid, nu), grid, nu, f, g)
}

/// Kernels for −(v″ + (1−ν)/r·v′) = f: D = r^ν, G = 1, ρ = r^{1−ν}, C = −ν.
pub(crate) fn zero_vertical_kernel<T: Real>(grid: &RadialGrid<T>, nu: T) -> GreenTable<T> {
    GreenTable::euler(grid, nu, T::zero(), T::one() - nu)
}

pub(crate) fn zero_vertical_with<T: Real>(
    t: &GreenTable<T>,
    grid: &Arc<RadialGrid<T>>,
    nu: T,
    f: &Source<T>,
    g: T,
) -> Result<(RadialProfile<T>, RadialProfile<T>)> {
    check_len(grid, f)?;
    let [v0, v1, v2] = t.solve_dirichlet(grid, &f.values, f.decay, creal(g))?;
    let mut vz = RadialProfile::from_values(grid, v0).with_derivatives(v1, v2);
    vz.decay_exponent = Some(-nu);
    Ok((RadialProfile::zeros(grid), vz))
}

/// Zero-mode meridional flow: v_{r,0} ≡ 0 (forced by incompressibility and
/// g_{r,0} = 0) and v_{z,0} with v_{z,0}(1) = g.
pub fn solve_zero_meridional<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    nu: T,
    f_z: &Source<T>,
    g: T,
) -> Result<(RadialProfile<T>, RadialProfile<T>)> {
    check_nu(nu)?;
    check_decay(f_z, int(2))?;
    zero_vertical_with(&zero_vertical_kernel(grid, nu), grid, nu, f_z, g)
}
