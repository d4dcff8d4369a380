//! Joint evaluation of I_ν and K_ν for real ν ≥ 0 and x > 0.
//!
//! K is obtained from Temme's series (x < 2) or Steed's continued fraction
//! (x ≥ 2) at the reduced order μ = ν − round(ν), then raised by forward
//! recurrence. I follows from the continued fraction for I'_ν/I_ν, downward
//! recurrence to μ, and normalisation through the Wronskian
//! I_μ K'_μ − I'_μ K_μ = −1/x. At integer ν the Temme coefficients take their
//! μ → 0 limits, which is the logarithmic series for K₀ and K₁.

use crate::scalar::{int, lit, Real};

const MAXIT: usize = 100_000;

/// Taylor coefficients of 1/Γ(z) about z = 0 (coefficient of z^k at index k).
const RGAMMA_TAYLOR: [f64; 29] = [
    0.0,
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_48,
    -0.042_197_734_555_544_33,
    -0.009_621_971_527_876_973,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065_2,
    -0.000_215_241_674_114_950_98,
    0.000_128_050_282_388_116_2,
    -0.000_020_134_854_780_788_24,
    -1.250_493_482_142_670_6e-6,
    1.133_027_231_981_696e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_02e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_6e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
    1.186_692_254_751_600_4e-18,
    1.412_380_655_318_031_9e-18,
];

/// Exponentially scaled values: `i = I·e^{−x}`, `k = K·e^{x}`, with derivatives
/// scaled by the same factors.
#[derive(Clone, Copy, Debug)]
pub(crate) struct IkScaled<T> {
    pub i: T,
    pub ip: T,
    pub k: T,
    pub kp: T,
}

/// Returns (gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ)) for |μ| ≤ 1/2, where
/// gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ) and gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2.
fn temme_gammas<T: Real>(mu: T) -> (T, T, T, T) {
    // 1/Γ(1+μ) = Σ_{j≥0} c_{j+1} μ^j; the odd part gives gam1, the even part gam2.
    let mu2 = mu * mu;
    let mut gam1 = T::zero();
    let mut gam2 = T::zero();
    let mut pw = T::one();
    let mut j = 0;
    while j + 2 < RGAMMA_TAYLOR.len() {
        gam2 += lit::<T>(RGAMMA_TAYLOR[j + 1]) * pw;
        gam1 -= lit::<T>(RGAMMA_TAYLOR[j + 2]) * pw;
        pw *= mu2;
        j += 2;
    }
    let gampl = gam2 - mu * gam1;
    let gammi = gam2 + mu * gam1;
    (gam1, gam2, gampl, gammi)
}

/// Unscaled K_μ(x), K_{μ+1}(x) for x < 2 by Temme's series.
fn temme_series<T: Real>(xmu: T, x: T) -> (T, T) {
    let eps = T::epsilon();
    let half = lit::<T>(0.5);
    let x2 = half * x;
    let pimu = T::PI() * xmu;
    let fact = if pimu.abs() < eps { T::one() } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < eps { T::one() } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = half * ee / gampl;
    let mut q = half / (ee * gammi);
    let mut c = T::one();
    let dd = x2 * x2;
    let mut sum1 = p;
    let xmu2 = xmu * xmu;
    for n in 1..MAXIT {
        let fi = int::<T>(n as i64);
        ff = (fi * ff + p + q) / (fi * fi - xmu2);
        c *= dd / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * ff;
        sum += del;
        sum1 += c * (p - fi * ff);
        if del.abs() < sum.abs() * eps {
            break;
        }
    }
    (sum, sum1 * lit::<T>(2.0) / x)
}

/// Scaled K_μ(x)·e^x, K_{μ+1}(x)·e^x for x ≥ 2 by Steed's continued fraction.
fn steed_cf2<T: Real>(xmu: T, x: T) -> (T, T) {
    let eps = T::epsilon();
    let two = lit::<T>(2.0);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let a1 = lit::<T>(0.25) - xmu * xmu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for n in 2..MAXIT {
        let fi = int::<T>(n as i64);
        a -= two * (fi - T::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < eps {
            break;
        }
    }
    h = a1 * h;
    let kmu = (T::PI() / (two * x)).sqrt() / s;
    let k1 = kmu * (xmu + x + lit::<T>(0.5) - h) / x;
    (kmu, k1)
}

/// Scaled I_ν, I'_ν, K_ν, K'_ν. Caller guarantees ν ≥ 0 and x > 0, both finite.
pub(crate) fn bessel_ik_scaled<T: Real>(nu: T, x: T) -> IkScaled<T> {
    let eps = T::epsilon();
    let fpmin = T::min_positive_value() / eps;
    let half = lit::<T>(0.5);
    let two = lit::<T>(2.0);
    let nl = (nu + half).floor().to_i64().unwrap_or(0).max(0);
    let xmu = nu - int::<T>(nl);
    let xi = T::one() / x;
    let xi2 = two * xi;

    // Continued fraction for I'_ν/I_ν.
    let mut h = nu * xi;
    if h < fpmin {
        h = fpmin;
    }
    let mut b = xi2 * nu;
    let mut d = T::zero();
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = T::one() / (b + d);
        c = b + T::one() / c;
        let del = c * d;
        h *= del;
        if (del - T::one()).abs() < eps {
            break;
        }
    }

    // Downward recurrence from ν to μ on an unnormalised pair.
    let big = lit::<T>(1e30);
    let mut ril = T::one();
    let mut ripl = h;
    let mut ril1 = ril;
    let mut rip1 = ripl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > big {
            let s = T::one() / big;
            ril *= s;
            ripl *= s;
            ril1 *= s;
            rip1 *= s;
        }
    }
    let f = ripl / ril;

    let (mut rkmu, mut rk1) = if x < two {
        let (a, b) = temme_series(xmu, x);
        let ex = x.exp();
        (a * ex, b * ex)
    } else {
        steed_cf2(xmu, x)
    };

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    let rip = rimu * rip1 / ril;
    for n in 1..=nl {
        let rktemp = (xmu + int::<T>(n)) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = rktemp;
    }
    let rkp = nu * xi * rkmu - rk1;
    IkScaled { i: ri, ip: rip, k: rkmu, kp: rkp }
}
