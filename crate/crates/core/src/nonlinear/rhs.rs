//! Quadratic right-hand sides of the reduced equations, mode by mode.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fourier::{
    convolve_product, sigma_regime, Component, Deriv, ForcingData, FourierField, ModeSeries,
};
use crate::linear::Source;
use crate::radial::{RadialGrid, RadialProfile};
use crate::scalar::{czero, int, Real};

/// External forcing sampled on the grid for modes k = 0..K.
#[derive(Clone, Debug)]
pub struct SampledForcing<T> {
    pub r: Vec<Source<T>>,
    pub theta: Vec<Source<T>>,
    pub z: Vec<Source<T>>,
}

impl<T: Real> SampledForcing<T> {
    /// Modes beyond K are ignored (with a warning). Derivative samples are
    /// dropped: forcing enters the solves next to quadratic terms that are
    /// grid functions.
    pub fn new(f: &ForcingData<T>, grid: &RadialGrid<T>, k_max: usize) -> Self {
        if f.max_mode() > k_max as i64 {
            log::warn!("forcing modes above K = {k_max} are ignored");
        }
        let take = |c: Component| {
            (0..=k_max as i64)
                .map(|k| match f.get(c, k) {
                    Some(rf) => {
                        let mut s = Source::sample(grid, rf);
                        s.d1 = None;
                        s
                    }
                    None => Source::zeros(grid.len()),
                })
                .collect()
        };
        Self { r: take(Component::R), theta: take(Component::Theta), z: take(Component::Z) }
    }

    pub fn zeros(n: usize, k_max: usize) -> Self {
        let z = || (0..=k_max).map(|_| Source::zeros(n)).collect();
        Self { r: z(), theta: z(), z: z() }
    }

    pub fn k_max(&self) -> usize {
        self.r.len() - 1
    }

    pub fn get(&self, c: Component) -> &[Source<T>] {
        match c {
            Component::R => &self.r,
            Component::Theta => &self.theta,
            Component::Z => &self.z,
        }
    }
}

/// f̄_{j,k} for k = 0..K. f̄_{r,0} is absorbed into the zero-mode pressure:
/// it is zeroed in `r[0]` and the discarded profile is kept in `discarded_r0`.
#[derive(Clone, Debug)]
pub struct RhsModes<T> {
    pub r: Vec<Source<T>>,
    pub theta: Vec<Source<T>>,
    pub z: Vec<Source<T>>,
    pub discarded_r0: Vec<Complex<T>>,
}

fn add_forcing<T: Real>(quad: &ModeSeries<T>, f: &[Source<T>], sign: T) -> Vec<Source<T>> {
    f.iter()
        .enumerate()
        .map(|(k, fk)| {
            let q = quad.get(k as i64);
            let quad_zero = q.iter().all(|v| v.norm() == T::zero());
            let values = q.iter().zip(&fk.values).map(|(&a, &b)| a * sign + b).collect();
            // a declared exponent only describes the forcing part
            let decay = if quad_zero { fk.decay } else { None };
            Source { values, d1: None, decay }
        })
        .collect()
}

/// Quadratic terms of the current iterate plus the external forcing:
///   f̄_θ = −(v_r∂_r + v_z∂_z)v_θ − v_r v_θ/r + f_θ,
///   f̄_r = −(v_r∂_r + v_z∂_z)v_r + v_θ²/r + 2σv_θ/r²·1_{−2≤ν<0} + f_r,
///   f̄_z = −(v_r∂_r + v_z∂_z)v_z + f_z,
/// with v_θ the o(1/r) part (the σ/r tail cancels exactly from f̄_θ).
pub fn assemble_rhs<T: Real>(
    vbar: &FourierField<T>,
    forcing: &SampledForcing<T>,
    nu: T,
) -> Result<RhsModes<T>> {
    let k_max = vbar.k_max();
    let n = vbar.grid().len();
    if forcing.k_max() != k_max || forcing.r[0].values.len() != n {
        return Err(Error::GridMismatch(format!(
            "forcing sampled for K = {} on {} nodes, iterate has K = {k_max} on {n} nodes",
            forcing.k_max(),
            forcing.r[0].values.len()
        )));
    }
    let r = vbar.grid().nodes();
    let inv_r: Vec<T> = r.iter().map(|&x| T::one() / x).collect();
    let inv_r2: Vec<T> = r.iter().map(|&x| T::one() / (x * x)).collect();
    let s = |c, d| ModeSeries::from_field(vbar, c, d);
    let (vr, vr1) = (s(Component::R, Deriv::Value)?, s(Component::R, Deriv::D1)?);
    let (vt, vt1) = (s(Component::Theta, Deriv::Value)?, s(Component::Theta, Deriv::D1)?);
    let (vz, vz1) = (s(Component::Z, Deriv::Value)?, s(Component::Z, Deriv::D1)?);
    let one = T::one();

    let advect = |a1: &ModeSeries<T>, a: &ModeSeries<T>| -> Result<ModeSeries<T>> {
        convolve_product(&vr, a1)?.axpby(one, &convolve_product(&vz, &a.dz())?, one)
    };

    let th = advect(&vt1, &vt)?.axpby(one, &convolve_product(&vr.weighted(&inv_r), &vt)?, one)?;
    let mut rr = advect(&vr1, &vr)?.axpby(
        one,
        &convolve_product(&vt, &vt)?.weighted(&inv_r),
        -one,
    )?;
    if let Some(sig) = vbar.sigma.filter(|_| sigma_regime(nu)) {
        rr = rr.axpby(one, &vt.weighted(&inv_r2), -int::<T>(2) * sig)?;
    }
    let zz = advect(&vz1, &vz)?;

    let mut r_modes = add_forcing(&rr, &forcing.r, -one);
    let discarded_r0 = std::mem::replace(&mut r_modes[0].values, vec![czero(); n]);
    r_modes[0].decay = None;
    Ok(RhsModes {
        r: r_modes,
        theta: add_forcing(&th, &forcing.theta, -one),
        z: add_forcing(&zz, &forcing.z, -one),
        discarded_r0,
    })
}

/// Adds the rotation coupling 2μ/r²·v_{θ,k} to a meridional forcing.
pub fn add_mu_coupling<T: Real>(f_r: &mut Source<T>, mu: T, v_theta: &RadialProfile<T>) {
    if mu == T::zero() || v_theta.is_zero() {
        return;
    }
    let two_mu = int::<T>(2) * mu;
    for ((f, &v), &r) in f_r.values.iter_mut().zip(&v_theta.values).zip(v_theta.grid.nodes()) {
        *f += v * (two_mu / (r * r));
    }
    f_r.decay = None;
}
