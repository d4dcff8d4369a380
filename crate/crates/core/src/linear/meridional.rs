//! Nonzero meridional modes through stream function φ and vorticity w:
//!   −(w″ + (1−ν)/r·w′ − (1−ν)/r²·w − k²w) = F = ik f_r − f_z′,
//!   −(φ″ + φ′/r − φ/r² − k²φ) = w,
//!   v_r = −ikφ,  v_z = φ′ + φ/r.
//! The decaying vorticity coefficient is fixed by requiring both boundary
//! values, which reduces to one moment condition on w against K₁(|k|s)s.

use std::sync::Arc;

use num_complex::Complex;

use super::green::GreenTable;
use super::Source;
use crate::error::{Error, Result};
use crate::radial::{ExpQuadrature, RadialGrid, RadialProfile};
use crate::scalar::{creal, czero, ik, int, lit, to_f64, Real};
use crate::special::KernelFamily;

/// Closure coefficients in scaled form: the unscaled values are
/// A = Âe^{−|k|}, B = B̂e^{−|k|}, D = D̂e^{−2|k|}, G = Ĝe^{−|k|}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureCoefficients<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub d: Complex<T>,
    pub g_f: Complex<T>,
}

#[derive(Clone, Debug)]
pub struct MeridionalModeSolution<T> {
    pub k: i64,
    pub v_r: RadialProfile<T>,
    pub v_z: RadialProfile<T>,
    /// Vorticity, with first derivative.
    pub w: RadialProfile<T>,
    /// Stream function, with two derivatives.
    pub phi: RadialProfile<T>,
    /// φ̄e^{−|k|}
    pub phi_bar_scaled: Complex<T>,
    /// w̄e^{−|k|}
    pub w_bar_scaled: Complex<T>,
    pub closure: ClosureCoefficients<T>,
}

impl<T: Real> MeridionalModeSolution<T> {
    fn kappa(&self) -> T {
        int(self.k.abs())
    }

    /// φ̄ (overflows only for |k| beyond the exponent range).
    pub fn phi_bar(&self) -> Complex<T> {
        self.phi_bar_scaled * self.kappa().exp()
    }

    pub fn w_bar(&self) -> Complex<T> {
        self.w_bar_scaled * self.kappa().exp()
    }
}

/// How the f_z′ part of the vorticity forcing is formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum FzPath {
    /// Integrate by parts so only f_z samples are needed.
    ByParts,
    /// Use supplied f_z′ samples.
    Direct,
}

/// Per-|k| kernel tables and closure integrals (independent of the data).
#[derive(Clone, Debug)]
pub(crate) struct MeridionalTables<T> {
    pub vort: GreenTable<T>,
    pub stream: GreenTable<T>,
    /// e^{−κ(r−1)}∫₁^r 𝔎̂ sÎ₁ ds
    hp: Vec<T>,
    /// e^{−κ(r−1)}∫_r^∞ 𝔎̂ sK̂₁ e^{−2κ(s−r)} ds
    hq: Vec<T>,
}

impl<T: Real> MeridionalTables<T> {
    pub fn new(grid: &RadialGrid<T>, k: i64, nu: T) -> Result<Self> {
        let vort = GreenTable::bessel(grid, k, nu, KernelFamily::Vorticity)?;
        let stream = GreenTable::bessel(grid, k, nu, KernelFamily::Stream)?;
        let r = grid.nodes();
        let kappa = vort.kappa;
        let a: Vec<_> =
            (0..r.len()).map(|i| creal(vort.dec[i][0] * r[i] * stream.gro[i][0])).collect();
        let b: Vec<_> =
            (0..r.len()).map(|i| creal(vort.dec[i][0] * r[i] * stream.dec[i][0])).collect();
        let inner = ExpQuadrature::new(grid, T::zero()).cumulative_inner(&a);
        let outer = ExpQuadrature::new(grid, kappa + kappa).cumulative_outer_closed(grid, &b, None)?;
        let hp = (0..r.len()).map(|i| inner[i].re * vort.damp[i]).collect();
        let hq = (0..r.len()).map(|i| outer[i].re * vort.damp[i]).collect();
        Ok(Self { vort, stream, hp, hq })
    }

    /// D̂ = ∫₁^∞ 𝔎̂ sK̂₁ e^{−2κ(s−1)} ds.
    pub fn d_hat(&self) -> T {
        self.hq[0]
    }
}

fn min_decay<T: Real>(a: &Source<T>, b: &Source<T>) -> Option<T> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => None,
        (false, true) => a.decay,
        (true, false) => b.decay,
        (false, false) => match (a.decay, b.decay) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        },
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn meridional_with<T: Real>(
    t: &MeridionalTables<T>,
    grid: &Arc<RadialGrid<T>>,
    k: i64,
    f_r: &Source<T>,
    f_z: &Source<T>,
    g_r: Complex<T>,
    g_z: Complex<T>,
    path: FzPath,
) -> Result<MeridionalModeSolution<T>> {
    let n = grid.len();
    if f_r.values.len() != n || f_z.values.len() != n {
        return Err(Error::GridMismatch("meridional forcing length differs from grid".into()));
    }
    let r = grid.nodes();
    let ikc = ik::<T>(k);
    let kappa = t.vort.kappa;
    let (v, s) = (&t.vort, &t.stream);

    // particular vorticity (algebraic part) plus coefficient of the decaying kernel
    let ikfr: Vec<_> = f_r.values.iter().map(|&x| x * ikc).collect();
    let (mut a, mut b) = v.sources(&ikfr);
    let mut beta = czero::<T>();
    let mut w_jump = vec![czero::<T>(); n];
    match path {
        FzPath::Direct => {
            let d1 = f_z.d1.as_ref().ok_or_else(|| {
                Error::MissingDerivative("direct vorticity forcing needs f_z′".into())
            })?;
            let neg: Vec<_> = d1.iter().map(|&x| -x).collect();
            let (az, bz) = v.sources(&neg);
            a.iter_mut().zip(az).for_each(|(x, y)| *x += y);
            b.iter_mut().zip(bz).for_each(|(x, y)| *x += y);
        }
        FzPath::ByParts => {
            let (az, bz) = v.sources_by_parts(&f_z.values);
            a.iter_mut().zip(az).for_each(|(x, y)| *x += y);
            b.iter_mut().zip(bz).for_each(|(x, y)| *x += y);
            beta = f_z.values[0] * (v.gro[0][0] / v.wronskian);
            w_jump = f_z.values.clone();
        }
    }
    let decay = min_decay(f_r, f_z);
    let decl = decay.map(|p| p - v.outer_weight_power(grid));
    let (p, q) = v.sweep(grid, &a, &b, decl)?;
    let [wa0, mut wa1, _] = v.combine(&p, &q);
    for i in 0..n {
        wa1[i] += w_jump[i];
    }

    // moment condition ∫₁^∞ w sK₁(|k|s) ds = K₁g_z + (g_r/(ik))(K₁ + |k|K₁′)
    let bk: Vec<_> = (0..n).map(|i| wa0[i] * (r[i] * s.dec[i][0])).collect();
    let g_alg = s.quad.cumulative_outer_closed(grid, &bk, None)?[0];
    let a_hat = creal(s.dec[0][0] + s.dec[0][1]) / ikc;
    let b_hat = creal(s.dec[0][0]);
    let d_hat = t.d_hat();
    if !(d_hat.abs() > lit::<T>(1e-8) / (kappa * kappa)) {
        return Err(Error::ClosureFloor { k, value: to_f64(d_hat) });
    }
    let w_tot = (a_hat * g_r + b_hat * g_z - g_alg) / d_hat;
    let closure = ClosureCoefficients { a: a_hat, b: b_hat, d: creal(d_hat), g_f: g_alg + beta * d_hat };

    let mut w0 = wa0.clone();
    let mut w1 = wa1;
    for i in 0..n {
        w0[i] += w_tot * (v.dec[i][0] * v.damp[i]);
        w1[i] += w_tot * (v.dec[i][1] * v.damp[i]);
    }

    // stream function
    let phi_hat = -g_z * s.gro[0][0] - g_r / ikc * (s.gro[0][0] + s.gro[0][1]);
    let (sa, sb) = s.sources(&wa0);
    let (mut pp, mut qq) = s.sweep(grid, &sa, &sb, None)?;
    for i in 0..n {
        pp[i] += w_tot * t.hp[i];
        qq[i] += w_tot * t.hq[i];
    }
    let [mut f0, mut f1, mut f2] = s.combine(&pp, &qq);
    for i in 0..n {
        let h = s.dec[i][0] * s.damp[i];
        f0[i] += phi_hat * h;
        f1[i] += phi_hat * (s.dec[i][1] * s.damp[i]);
        f2[i] = f2[i] + phi_hat * (s.dec[i][2] * s.damp[i]) - w0[i];
    }

    let k2 = int::<T>(k * k);
    let mut vr = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut vz = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for i in 0..n {
        let x = r[i];
        vr[0].push(-ikc * f0[i]);
        vr[1].push(-ikc * f1[i]);
        vr[2].push(-ikc * f2[i]);
        vz[0].push(f1[i] + f0[i] / x);
        vz[1].push(f2[i] + f1[i] / x - f0[i] / (x * x));
        vz[2].push(-w1[i] + f1[i] * k2);
    }
    let [r0, r1, r2] = vr;
    let [z0, z1, z2] = vz;
    let mut w = RadialProfile::from_values(grid, w0);
    w.d1 = Some(w1);
    Ok(MeridionalModeSolution {
        k,
        v_r: RadialProfile::from_values(grid, r0).with_derivatives(r1, r2),
        v_z: RadialProfile::from_values(grid, z0).with_derivatives(z1, z2),
        w,
        phi: RadialProfile::from_values(grid, f0).with_derivatives(f1, f2),
        phi_bar_scaled: phi_hat,
        w_bar_scaled: w_tot - beta,
        closure,
    })
}

/// Meridional mode k ≠ 0 with v_r(1) = g_r, v_z(1) = g_z. The f_z′ term of
/// the vorticity forcing is integrated by parts, so only f_z samples are used.
#[allow(clippy::too_many_arguments)]
pub fn solve_meridional_mode<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    k: i64,
    nu: T,
    f_r: &Source<T>,
    f_z: &Source<T>,
    g_r: Complex<T>,
    g_z: Complex<T>,
) -> Result<MeridionalModeSolution<T>> {
    let t = MeridionalTables::new(grid, k, nu)?;
    meridional_with(&t, grid, k, f_r, f_z, g_r, g_z, FzPath::ByParts)
}

/// As [`solve_meridional_mode`] but forming f_z′ from `f_z.d1` directly.
#[allow(clippy::too_many_arguments)]
pub fn solve_meridional_mode_direct<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    k: i64,
    nu: T,
    f_r: &Source<T>,
    f_z: &Source<T>,
    g_r: Complex<T>,
    g_z: Complex<T>,
) -> Result<MeridionalModeSolution<T>> {
    let t = MeridionalTables::new(grid, k, nu)?;
    meridional_with(&t, grid, k, f_r, f_z, g_r, g_z, FzPath::Direct)
}
