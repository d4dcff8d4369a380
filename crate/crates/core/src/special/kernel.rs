//! Mode kernels r^β·B_α(|k|r) with B ∈ {I, K} and their first two radial derivatives.

use super::{bessel_ik_scaled, BesselOrder};
use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Which homogeneous equation a kernel pair solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelFamily {
    /// r^{ν/2}B_{|1+ν/2|}(|k|r): swirl mode.
    Swirl,
    /// r^{ν/2}B_{|1−ν/2|}(|k|r): vorticity mode.
    Vorticity,
    /// B₁(|k|r): stream function.
    Stream,
}

impl KernelFamily {
    pub fn order<T: Real>(self, nu: T) -> BesselOrder<T> {
        match self {
            KernelFamily::Swirl => BesselOrder::swirl(nu),
            KernelFamily::Vorticity => BesselOrder::vorticity(nu),
            KernelFamily::Stream => BesselOrder::stream(),
        }
    }

    pub fn power<T: Real>(self, nu: T) -> T {
        match self {
            KernelFamily::Swirl | KernelFamily::Vorticity => nu * lit(0.5),
            KernelFamily::Stream => T::zero(),
        }
    }
}

/// Kernel value and first two r-derivatives, each equal to `mantissa · e^{exp_shift}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub exp_shift: T,
}

impl<T: Real> KernelValue<T> {
    pub fn unscaled(self) -> [T; 3] {
        let e = self.exp_shift.exp();
        [self.value * e, self.d1 * e, self.d2 * e]
    }
}

fn check<T: Real>(k: i64, r: T) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain(
            "Bessel kernels are defined for k ≠ 0; the zero mode uses Euler kernels".into(),
        ));
    }
    if !r.is_finite() || r < T::one() {
        return Err(Error::Domain(format!("kernel radius must be ≥ 1, got {}", to_f64(r))));
    }
    Ok(())
}

/// Decaying and growing kernels (𝒦-type, 𝓘-type) at one radius.
pub fn kernel_pair<T: Real>(
    k: i64,
    nu: T,
    r: T,
    family: KernelFamily,
) -> Result<(KernelValue<T>, KernelValue<T>)> {
    check(k, r)?;
    let kap = T::from_i64(k.abs()).expect("mode index fits scalar");
    let alpha = family.order(nu).alpha();
    let beta = family.power(nu);
    let x = kap * r;
    let lo = bessel_ik_scaled(alpha, x);
    let hi = bessel_ik_scaled(alpha + T::one(), x);
    let (ka, ka1, ia, ia1) = (lo.k, hi.k, lo.i, hi.i);
    let one = T::one();

    // x-derivatives; order α+1 through the recurrences
    let ka_p = lo.kp;
    let ka1_p = -ka - (alpha + one) / x * ka1;
    let ia_p = lo.ip;
    let ia1_p = ia - (alpha + one) / x * ia1;

    let rb = r.powf(beta);
    let rb1 = rb / r;
    let rb2 = rb1 / r;
    let c = beta + alpha;

    let kk = KernelValue {
        value: rb * ka,
        d1: c * rb1 * ka - kap * rb * ka1,
        d2: c * (beta - one) * rb2 * ka + c * rb1 * kap * ka_p
            - kap * beta * rb1 * ka1
            - kap * kap * rb * ka1_p,
        exp_shift: -x,
    };
    let ii = KernelValue {
        value: rb * ia,
        d1: c * rb1 * ia + kap * rb * ia1,
        d2: c * (beta - one) * rb2 * ia + c * rb1 * kap * ia_p
            + kap * beta * rb1 * ia1
            + kap * kap * rb * ia1_p,
        exp_shift: x,
    };
    Ok((kk, ii))
}

/// Decaying kernel r^β K_α(|k|r) of the given family.
pub fn kernel_k<T: Real>(k: i64, nu: T, r: T, family: KernelFamily) -> Result<KernelValue<T>> {
    kernel_pair(k, nu, r, family).map(|p| p.0)
}

/// Growing kernel r^β I_α(|k|r) of the given family.
pub fn kernel_i<T: Real>(k: i64, nu: T, r: T, family: KernelFamily) -> Result<KernelValue<T>> {
    kernel_pair(k, nu, r, family).map(|p| p.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bessel_i, bessel_k};

    /// Homogeneous operator of each family applied to (v, v', v'').
    fn homogeneous(family: KernelFamily, k: i64, nu: f64, r: f64, v: [f64; 3]) -> f64 {
        let k2 = (k * k) as f64;
        match family {
            KernelFamily::Swirl => {
                v[2] + (1.0 - nu) / r * v[1] - (1.0 + nu) / (r * r) * v[0] - k2 * v[0]
            }
            KernelFamily::Vorticity => {
                v[2] + (1.0 - nu) / r * v[1] - (1.0 - nu) / (r * r) * v[0] - k2 * v[0]
            }
            KernelFamily::Stream => v[2] + v[1] / r - v[0] / (r * r) - k2 * v[0],
        }
    }

    #[test]
    fn nu_zero_swirl_reduces_to_first_order() {
        let (kk, ii) = kernel_pair(1, 0.0f64, 2.5, KernelFamily::Swirl).unwrap();
        let o = BesselOrder::stream();
        assert!((kk.value - bessel_k(o, 2.5).unwrap().mantissa).abs() < 1e-15);
        assert!((ii.value - bessel_i(o, 2.5).unwrap().mantissa).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_residuals_vanish() {
        for fam in [KernelFamily::Swirl, KernelFamily::Vorticity, KernelFamily::Stream] {
            for &nu in &[-0.5, -1.0, -2.0, -3.0, -4.0, -6.3] {
                for &k in &[1i64, -2, 5] {
                    for &r in &[1.0, 1.7, 4.0, 20.0] {
                        let (kk, ii) = kernel_pair::<f64>(k, nu, r, fam).unwrap();
                        for kv in [kk, ii] {
                            let scale = kv.value.abs() + kv.d1.abs() + kv.d2.abs();
                            let res =
                                homogeneous(fam, k, nu, r, [kv.value, kv.d1, kv.d2]);
                            assert!(res.abs() <= 1e-10 * scale, "{fam:?} nu={nu} k={k} r={r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decaying_kernel_decreases() {
        for &nu in &[-1.0, -3.0] {
            for &k in &[1i64, 3] {
                for n in 0..50 {
                    let r = 1.0 + n as f64 * 0.2;
                    let kk = kernel_k(k, nu, r, KernelFamily::Swirl).unwrap();
                    assert!(kk.d1 < 0.0);
                }
            }
        }
    }

    #[test]
    fn growing_kernel_increases_except_near_wall_for_steep_powers() {
        // r^{ν/2} can win over I_α(|k|r) near r = 1 when ν < −2 and |k| is small.
        for &k in &[1i64, 3] {
            for n in 0..50 {
                let r = 1.0 + n as f64 * 0.2;
                assert!(kernel_i(k, -1.0, r, KernelFamily::Swirl).unwrap().d1 > 0.0);
            }
        }
        assert!(kernel_i(1, -3.0f64, 1.0, KernelFamily::Swirl).unwrap().d1 < 0.0);
        for n in 0..50 {
            let r = 3.0 + n as f64 * 0.2;
            assert!(kernel_i(1, -3.0f64, r, KernelFamily::Swirl).unwrap().d1 > 0.0);
            assert!(kernel_i(3, -3.0f64, 1.0 + n as f64 * 0.2, KernelFamily::Swirl).unwrap().d1 > 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (nu, k, r, h) = (-3.0, 2, 1.8, 1e-5);
        let f = |r: f64| kernel_pair(k, nu, r, KernelFamily::Vorticity).unwrap();
        let (c, _) = f(r);
        let (p, _) = f(r + h);
        let (m, _) = f(r - h);
        let d1 = (p.unscaled()[0] - m.unscaled()[0]) / (2.0 * h);
        let d2 = (p.unscaled()[1] - m.unscaled()[1]) / (2.0 * h);
        assert!(((d1 - c.unscaled()[1]) / d1).abs() < 1e-8);
        assert!(((d2 - c.unscaled()[2]) / d2).abs() < 1e-8);
    }

    #[test]
    fn zero_mode_rejected() {
        assert!(kernel_k(0, -1.0, 2.0, KernelFamily::Swirl).is_err());
        assert!(kernel_i(1, -1.0, 0.5, KernelFamily::Swirl).is_err());
    }
}
