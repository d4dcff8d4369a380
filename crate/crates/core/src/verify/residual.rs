//! Residuals of the full steady axisymmetric system in physical space.

use num_complex::Complex;
use rayon::prelude::*;

use super::decay::{decay_fit, DecayFit};
use crate::error::{Error, Result};
use crate::fourier::{BoundaryData, Component, ForcingData, FourierField};
use crate::radial::{DiffOperator, RadialProfile};
use crate::scalar::{czero, ik, int, to_f64, Real};

/// Largest residuals on r ≤ R_max/2 (`inner`) and r > R_max/2 (`outer`).
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport<T> {
    /// r-, θ-, z-momentum.
    pub momentum: [T; 3],
    pub momentum_outer: [T; 3],
    pub divergence: T,
    pub divergence_outer: T,
    /// max_z |u(1, z) − (ν + g_r, μ + g_θ, g_z)|; zero when no data was given.
    pub boundary_mismatch: T,
    pub decay_fits: Vec<(String, DecayFit<T>)>,
    pub n_radial: usize,
    pub k_max: usize,
    pub z_samples: usize,
    /// Per node: r, then max over z of |R_r|, |R_θ|, |R_z|, |div|.
    pub curves: Vec<[T; 5]>,
    /// Pressure entered directly (true) or was eliminated (false).
    pub with_pressure: bool,
}

impl<T: Real> ResidualReport<T> {
    pub fn max_momentum(&self) -> T {
        self.momentum.iter().copied().fold(T::zero(), T::max)
    }
}

/// Physical samples of one scalar and its derivatives.
#[derive(Clone, Copy, Default)]
struct Jet<T> {
    v: T,
    r: T,
    rr: T,
    z: T,
    zz: T,
}

struct ModeJets<T> {
    v: Vec<Complex<T>>,
    d1: Vec<Complex<T>>,
    d2: Vec<Complex<T>>,
}

fn jets<T: Real>(d: &DiffOperator<T>, p: &RadialProfile<T>) -> ModeJets<T> {
    ModeJets { v: p.values.clone(), d1: d.first(&p.values), d2: d.second(&p.values) }
}

fn dft<T: Real>(samples: &[T], k: i64, phases: &[Complex<T>]) -> Complex<T> {
    let m = samples.len();
    let mut acc = czero::<T>();
    for (j, &s) in samples.iter().enumerate() {
        let idx = ((k.rem_euclid(m as i64) as usize) * j) % m;
        acc += phases[idx].conj() * s;
    }
    acc / T::from_usize(m).expect("sample count fits scalar")
}

/// Residuals of the momentum and continuity equations for
/// u = (ν/r)e_r + ((μ + σ)/r)e_θ + Σ_k v_k e^{ikz}, on the radial grid
/// times `z_samples` equispaced z. Radial derivatives of the modes use the
/// five-point stencils, z-derivatives are exact, the background is exact.
///
/// With `pressure` (modes k = 0..K) the r- and z-equations are checked as
/// written. Without it the pressure is eliminated: for k ≠ 0 the r-residual is
/// (ik A_{r,k} − ∂_r A_{z,k})/(ik) with A the pressure-free residual (so the
/// z-equation holds by the choice π_k = −A_{z,k}/(ik)); for k = 0 the
/// r-equation defines π_0 and the z-equation is checked directly.
#[allow(clippy::too_many_arguments)]
pub fn residual_asns<T: Real>(
    v: &FourierField<T>,
    nu: T,
    mu: T,
    f: &ForcingData<T>,
    g: Option<&BoundaryData<T>>,
    pressure: Option<&[RadialProfile<T>]>,
    z_samples: usize,
) -> Result<ResidualReport<T>> {
    let grid = v.grid().clone();
    let kk = v.k_max() as i64;
    let m = z_samples.max(1);
    if let Some(p) = pressure {
        if p.len() != v.k_max() + 1 || p.iter().any(|q| q.len() != grid.len()) {
            return Err(Error::GridMismatch("pressure must hold modes 0..K on the field grid".into()));
        }
    }
    let d = DiffOperator::new(&grid);
    let r = grid.nodes();
    let n = r.len();
    let two_pi = T::PI() + T::PI();
    let phases: Vec<Complex<T>> = (0..m)
        .map(|j| Complex::from_polar(T::one(), two_pi * int::<T>(j as i64) / int::<T>(m as i64)))
        .collect();
    let phase = |k: i64, j: usize| phases[((k.rem_euclid(m as i64) as usize) * j) % m];

    // mode jets: index [k + K][component]
    let mj: Vec<[ModeJets<T>; 3]> = v
        .iter()
        .map(|(_, md)| [jets(&d, &md.r), jets(&d, &md.theta), jets(&d, &md.z)])
        .collect();
    let pj: Option<Vec<ModeJets<T>>> = pressure.map(|p| p.iter().map(|q| jets(&d, q)).collect());
    let sigma = v.sigma.unwrap_or(T::zero());
    let forcing: Vec<(Component, i64, &crate::fourier::RadialFunction<T>)> = f.iter().collect();

    // pressure-free residuals A_r, A_θ, A_z and divergence at (r_i, z_j)
    type Row<T> = (Vec<[T; 4]>, Vec<T>);
    let rows: Vec<Row<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let x = r[i];
            let mut out = Vec::with_capacity(m);
            let mut pr = Vec::with_capacity(m);
            for j in 0..m {
                let mut u = [Jet::<T>::default(); 3];
                for (s, jet) in mj.iter().enumerate() {
                    let k = s as i64 - kk;
                    let e = phase(k, j);
                    let ikc = ik::<T>(k);
                    for c in 0..3 {
                        let (a, a1, a2) = (jet[c].v[i] * e, jet[c].d1[i] * e, jet[c].d2[i] * e);
                        u[c].v += a.re;
                        u[c].r += a1.re;
                        u[c].rr += a2.re;
                        u[c].z += (a * ikc).re;
                        u[c].zz += (a * ikc * ikc).re;
                    }
                }
                let two = int::<T>(2);
                for (c, coef) in [(0usize, nu), (1, mu + sigma)] {
                    u[c].v += coef / x;
                    u[c].r -= coef / (x * x);
                    u[c].rr += two * coef / (x * x * x);
                }
                let mut fv = [T::zero(); 3];
                for (c, k, rf) in &forcing {
                    let slot = match c {
                        Component::R => 0,
                        Component::Theta => 1,
                        Component::Z => 2,
                    };
                    fv[slot] += (rf.eval(x) * phase(*k, j)).re;
                }
                let lap = |q: &Jet<T>| q.rr + q.r / x + q.zz;
                let adv = |q: &Jet<T>| u[0].v * q.r + u[2].v * q.z;
                let ar = adv(&u[0]) - u[1].v * u[1].v / x - (lap(&u[0]) - u[0].v / (x * x)) - fv[0];
                let at = adv(&u[1]) + u[1].v * u[0].v / x - (lap(&u[1]) - u[1].v / (x * x)) - fv[1];
                let az = adv(&u[2]) - lap(&u[2]) - fv[2];
                let div = u[0].r + u[0].v / x + u[2].z;
                out.push([ar, at, az, div]);
                if let Some(p) = &pj {
                    let (mut px, mut pz) = (T::zero(), T::zero());
                    for (k, q) in p.iter().enumerate() {
                        let k = k as i64;
                        let e = phase(k, j);
                        let w = if k == 0 { T::one() } else { int::<T>(2) };
                        px += (q.d1[i] * e).re * w;
                        pz += (q.v[i] * e * ik::<T>(k)).re * w;
                    }
                    pr.push(px);
                    pr.push(pz);
                }
            }
            (out, pr)
        })
        .collect();

    // momentum residual per node and z-sample
    let mut res: Vec<Vec<[T; 3]>> = vec![vec![[T::zero(); 3]; m]; n];
    if pressure.is_some() {
        for i in 0..n {
            for j in 0..m {
                let a = rows[i].0[j];
                res[i][j] = [a[0] + rows[i].1[2 * j], a[1], a[2] + rows[i].1[2 * j + 1]];
            }
        }
    } else {
        let kmax_res = ((m - 1) / 2) as i64;
        let ar: Vec<Vec<T>> = rows.iter().map(|row| row.0.iter().map(|a| a[0]).collect()).collect();
        let az: Vec<Vec<T>> = rows.iter().map(|row| row.0.iter().map(|a| a[2]).collect()).collect();
        for i in 0..n {
            for j in 0..m {
                res[i][j][1] = rows[i].0[j][1];
            }
        }
        // k = 0: z-equation directly
        for i in 0..n {
            let z0 = dft(&az[i], 0, &phases).re;
            for j in 0..m {
                res[i][j][2] = z0;
            }
        }
        for k in 1..=kmax_res {
            let ark: Vec<Complex<T>> = ar.iter().map(|s| dft(s, k, &phases)).collect();
            let azk: Vec<Complex<T>> = az.iter().map(|s| dft(s, k, &phases)).collect();
            let dazk = d.first(&azk);
            let ikc = ik::<T>(k);
            for i in 0..n {
                let rk = (ark[i] * ikc - dazk[i]) / ikc;
                for j in 0..m {
                    // mode k and its conjugate at −k
                    res[i][j][0] += (rk * phase(k, j)).re * int::<T>(2);
                }
            }
        }
    }

    let half = grid.r_max() / int::<T>(2);
    let mut momentum = [T::zero(); 3];
    let mut momentum_outer = [T::zero(); 3];
    let mut divergence = T::zero();
    let mut divergence_outer = T::zero();
    let mut curves = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = [r[i], T::zero(), T::zero(), T::zero(), T::zero()];
        for j in 0..m {
            for q in 0..3 {
                c[q + 1] = c[q + 1].max(res[i][j][q].abs());
            }
            c[4] = c[4].max(rows[i].0[j][3].abs());
        }
        let (mom, div) = if r[i] <= half {
            (&mut momentum, &mut divergence)
        } else {
            (&mut momentum_outer, &mut divergence_outer)
        };
        for q in 0..3 {
            mom[q] = mom[q].max(c[q + 1]);
        }
        *div = div.max(c[4]);
        curves.push(c);
    }

    let mut boundary_mismatch = T::zero();
    if let Some(g) = g {
        for j in 0..m {
            let mut want = [nu, mu, T::zero()];
            for (c, k, val) in g.iter() {
                let slot = match c {
                    Component::R => 0,
                    Component::Theta => 1,
                    Component::Z => 2,
                };
                want[slot] += (val * phase(k, j)).re;
            }
            let mut got = [nu, mu + sigma, T::zero()];
            for (s, jet) in mj.iter().enumerate() {
                let e = phase(s as i64 - kk, j);
                for c in 0..3 {
                    got[c] += (jet[c].v[0] * e).re;
                }
            }
            for c in 0..3 {
                boundary_mismatch = boundary_mismatch.max((got[c] - want[c]).abs());
            }
        }
    }

    Ok(ResidualReport {
        momentum,
        momentum_outer,
        divergence,
        divergence_outer,
        boundary_mismatch,
        decay_fits: field_decay_fits(v),
        n_radial: n,
        k_max: v.k_max(),
        z_samples: m,
        curves,
        with_pressure: pressure.is_some(),
    })
}

/// Log-log slopes over the last decade: the regular zero-mode swirl, the
/// zero-mode vertical velocity and each nonzero mode k > 0 (largest
/// component). Profiles that vanish over the window are skipped.
pub fn field_decay_fits<T: Real>(v: &FourierField<T>) -> Vec<(String, DecayFit<T>)> {
    let mut out = Vec::new();
    let m0 = v.mode(0);
    if let Ok(fit) = decay_fit(&m0.theta) {
        out.push(("theta_0".to_string(), fit));
    }
    if let Ok(fit) = decay_fit(&m0.z) {
        out.push(("z_0".to_string(), fit));
    }
    for k in 1..=v.k_max() as i64 {
        let md = v.mode(k);
        for c in Component::ALL {
            if let Ok(fit) = decay_fit(md.get(c)) {
                out.push((format!("{}_{k}", c.name()), fit));
            }
        }
    }
    log::debug!("decay fits: {}", out.len());
    let _ = to_f64::<T>;
    out
}
