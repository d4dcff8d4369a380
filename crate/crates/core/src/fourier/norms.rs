use super::field::{Component, FourierField};
use crate::error::Result;
use crate::radial::weighted_sup_values;
use crate::scalar::{int, lit, Real};

/// True when the zero-mode swirl carries a 1/r tail (−2 ≤ ν < 0).
pub fn sigma_regime<T: Real>(nu: T) -> bool {
    nu >= lit(-2.0) && nu < T::zero()
}

/// ‖v‖ in the solution space with decay index τ:
///   |σ|·1_{−2≤ν<0} + Σ_ℓ ‖v^{(2−ℓ)}‖_{3+τ−ℓ} + Σ_ℓ ‖v_{z,0}^{(2−ℓ)}‖_{2+τ−ℓ}
///   + Σ_{k≠0, j, ℓ} |k|^{2−ℓ} ‖v_{j,k}^{(ℓ)}‖_{3/2+τ},
/// with v the o(1/r) part of the zero-mode swirl. Needs d1 and d2 on every profile.
pub fn bnorm<T: Real>(v: &FourierField<T>, tau: T, nu: T) -> Result<T> {
    let grid = v.grid();
    let sup = |s: &[num_complex::Complex<T>], zeta: T| weighted_sup_values(grid, s, zeta).value;
    let mut total = T::zero();
    if sigma_regime(nu) {
        total += v.sigma.unwrap_or(T::zero()).abs();
    }
    let m0 = v.mode(0);
    let three = int::<T>(3);
    let two = int::<T>(2);
    let one = T::one();
    let th = &m0.theta;
    total += sup(th.d2()?, three + tau) + sup(th.d1()?, two + tau) + sup(&th.values, one + tau);
    let vz = &m0.z;
    total += sup(vz.d2()?, two + tau) + sup(vz.d1()?, one + tau) + sup(&vz.values, tau);
    let zeta = lit::<T>(1.5) + tau;
    for (k, m) in v.iter() {
        if k == 0 {
            continue;
        }
        let kf = int::<T>(k.abs());
        for c in Component::ALL {
            let p = m.get(c);
            total += kf * kf * sup(&p.values, zeta) + kf * sup(p.d1()?, zeta) + sup(p.d2()?, zeta);
        }
    }
    Ok(total)
}
