//! Second-order finite-difference solutions of the radial two-point problems,
//! used as an independent check on the Green's-function representations.

use std::sync::Arc;

use num_complex::Complex;

use super::diff::fornberg_weights;
use super::grid::{RadialGrid, RadialProfile};
use crate::error::{Error, Result};
use crate::scalar::{creal, czero, int, Real};

/// Far-field behaviour used to close the problem at R_max with a Robin condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayClass<T> {
    /// v ~ r^{−p}
    Power(T),
    /// v ~ r^{q} e^{−rate·r}
    Exponential { rate: T, power: T },
}

impl<T: Real> DecayClass<T> {
    /// ρ in v′(R) + ρ v(R) = 0.
    fn robin(self, r: T) -> T {
        match self {
            DecayClass::Power(p) => p / r,
            DecayClass::Exponential { rate, power } => rate - power / r,
        }
    }
}

/// −(v″ + p₁(r)v′ + p₀(r)v − shift·v) = f
pub struct OdeCoefficients<'a, T> {
    pub p1: &'a dyn Fn(T) -> T,
    pub p0: &'a dyn Fn(T) -> T,
    pub shift: T,
}

/// Banded complex matrix with partial-pivoting Gaussian elimination.
struct Banded<T> {
    n: usize,
    kl: usize,
    ku: usize,
    w: usize,
    a: Vec<Complex<T>>,
}

impl<T: Real> Banded<T> {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self { n, kl, ku, w, a: vec![czero(); n * w] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.w + (j + self.kl - i)
    }

    fn add(&mut self, i: usize, j: usize, v: Complex<T>) {
        let k = self.idx(i, j);
        self.a[k] += v;
    }

    fn solve(mut self, mut b: Vec<Complex<T>>) -> Result<Vec<Complex<T>>> {
        let n = self.n;
        let reach = self.ku + self.kl;
        for k in 0..n {
            let last = (k + self.kl).min(n - 1);
            let mut p = k;
            let mut best = self.a[self.idx(k, k)].norm();
            for i in k + 1..=last {
                let v = self.a[self.idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() {
                return Err(Error::Singular(format!("zero pivot in column {k}")));
            }
            let jmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (x, y) = (self.idx(k, j), self.idx(p, j));
                    self.a.swap(x, y);
                }
                b.swap(k, p);
            }
            let piv = self.a[self.idx(k, k)];
            for i in k + 1..=last {
                let f = self.a[self.idx(i, k)] / piv;
                if f.norm() == T::zero() {
                    continue;
                }
                for j in k..=jmax {
                    let v = self.a[self.idx(k, j)];
                    let t = self.idx(i, j);
                    self.a[t] -= f * v;
                }
                b[i] = b[i] - f * b[k];
            }
        }
        let mut x = vec![czero::<T>(); n];
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + reach).min(n - 1) {
                s -= self.a[self.idx(k, j)] * x[j];
            }
            x[k] = s / self.a[self.idx(k, k)];
        }
        Ok(x)
    }
}

/// Three-point weights (second order) for v′ and v″ at node i.
fn three_point<T: Real>(r: &[T], i: usize) -> ([T; 3], [T; 3], usize) {
    let n = r.len();
    let s = if i == 0 { 0 } else if i == n - 1 { n - 3 } else { i - 1 };
    let c = fornberg_weights(r[i], &r[s..s + 3], 2);
    ([c[1][0], c[1][1], c[1][2]], [c[2][0], c[2][1], c[2][2]], s)
}

/// Dirichlet at r = 1, Robin closure at R_max from `decay`.
pub fn fd_bvp_oracle<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    coeffs: &OdeCoefficients<'_, T>,
    rhs: &dyn Fn(T) -> Complex<T>,
    bc_left: Complex<T>,
    decay: DecayClass<T>,
) -> Result<RadialProfile<T>> {
    let r = grid.nodes();
    let n = r.len();
    let mut m = Banded::new(n, 2, 2);
    let mut b = vec![czero::<T>(); n];
    m.add(0, 0, creal(T::one()));
    b[0] = bc_left;
    for i in 1..n - 1 {
        let (d1, d2, s) = three_point(r, i);
        let p1 = (coeffs.p1)(r[i]);
        for j in 0..3 {
            m.add(i, s + j, creal(-(d2[j] + p1 * d1[j])));
        }
        m.add(i, i, creal(-((coeffs.p0)(r[i]) - coeffs.shift)));
        b[i] = rhs(r[i]);
    }
    let (d1, _, s) = three_point(r, n - 1);
    for j in 0..3 {
        m.add(n - 1, s + j, creal(d1[j]));
    }
    m.add(n - 1, n - 1, creal(decay.robin(r[n - 1])));
    let v = m.solve(b)?;
    Ok(RadialProfile::from_values(grid, v))
}

/// Finite-difference solution of the coupled stream-function/vorticity problem
///   −(φ″ + φ′/r − k²φ − φ/r²) = w,
///   −(w″ + (1−ν)/r w′ − (1−ν)/r² w − k²w) = F,
/// with v_r(1) = −ikφ(1) = g_r and v_z(1) = φ′(1) + φ(1) = g_z.
#[derive(Clone, Debug)]
pub struct CoupledOracleSolution<T> {
    pub phi: Vec<Complex<T>>,
    pub w: Vec<Complex<T>>,
    pub v_r: Vec<Complex<T>>,
    pub v_z: Vec<Complex<T>>,
}

#[allow(clippy::too_many_arguments)]
pub fn fd_stream_vorticity_oracle<T: Real>(
    grid: &Arc<RadialGrid<T>>,
    k: i64,
    nu: T,
    forcing: &dyn Fn(T) -> Complex<T>,
    g_r: Complex<T>,
    g_z: Complex<T>,
    decay_phi: DecayClass<T>,
    decay_w: DecayClass<T>,
) -> Result<CoupledOracleSolution<T>> {
    if k == 0 {
        return Err(Error::Domain("coupled oracle needs k ≠ 0".into()));
    }
    let r = grid.nodes();
    let n = r.len();
    let k2 = int::<T>(k * k);
    let ikc = Complex::new(T::zero(), int::<T>(k));
    let one = T::one();
    let mut m = Banded::new(2 * n, 4, 3);
    let mut b = vec![czero::<T>(); 2 * n];
    let phi0 = -g_r / ikc;
    m.add(0, 0, creal(one));
    b[0] = phi0;
    let (d1, _, s) = three_point(r, 0);
    for j in 0..3 {
        m.add(1, 2 * (s + j), creal(d1[j]));
    }
    b[1] = g_z - phi0;
    for i in 1..n - 1 {
        let (d1, d2, s) = three_point(r, i);
        let ri = r[i];
        let (rp, wp) = (2 * i, 2 * i + 1);
        for j in 0..3 {
            m.add(rp, 2 * (s + j), creal(-(d2[j] + d1[j] / ri)));
            m.add(wp, 2 * (s + j) + 1, creal(-(d2[j] + (one - nu) / ri * d1[j])));
        }
        m.add(rp, rp, creal(k2 + one / (ri * ri)));
        m.add(rp, wp, creal(-one));
        m.add(wp, wp, creal((one - nu) / (ri * ri) + k2));
        b[wp] = forcing(ri);
    }
    let (d1, _, s) = three_point(r, n - 1);
    let rr = r[n - 1];
    for j in 0..3 {
        m.add(2 * (n - 1), 2 * (s + j), creal(d1[j]));
        m.add(2 * (n - 1) + 1, 2 * (s + j) + 1, creal(d1[j]));
    }
    m.add(2 * (n - 1), 2 * (n - 1), creal(decay_phi.robin(rr)));
    m.add(2 * (n - 1) + 1, 2 * (n - 1) + 1, creal(decay_w.robin(rr)));
    let x = m.solve(b)?;
    let phi: Vec<_> = (0..n).map(|i| x[2 * i]).collect();
    let w: Vec<_> = (0..n).map(|i| x[2 * i + 1]).collect();
    let v_r = phi.iter().map(|&p| -ikc * p).collect();
    let v_z = (0..n)
        .map(|i| {
            let (d1, _, s) = three_point(r, i);
            let dp = (0..3).fold(czero::<T>(), |acc, j| acc + phi[s + j] * d1[j]);
            dp + phi[i] / r[i]
        })
        .collect();
    Ok(CoupledOracleSolution { phi, w, v_r, v_z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{bessel_k, BesselOrder};

    fn max_err(p: &RadialProfile<f64>, exact: impl Fn(f64) -> f64) -> f64 {
        p.grid
            .nodes()
            .iter()
            .zip(&p.values)
            .map(|(&r, v)| (v.re - exact(r)).abs())
            .fold(0.0, f64::max)
    }

    fn order(errs: &[f64]) -> f64 {
        (errs[0] / errs[1]).log2().min((errs[1] / errs[2]).log2())
    }

    fn swirl_zero(nu: f64) -> (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>) {
        (Box::new(move |r| (1.0 - nu) / r), Box::new(move |r| -(1.0 + nu) / (r * r)))
    }

    #[test]
    fn homogeneous_inverse_r() {
        let (p1, p0) = swirl_zero(-1.0);
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let g = Arc::new(RadialGrid::graded(100.0, n, 2.0).unwrap());
                let c = OdeCoefficients { p1: &*p1, p0: &*p0, shift: 0.0 };
                let v = fd_bvp_oracle(&g, &c, &|_| creal(0.0), creal(1.0), DecayClass::Power(1.0))
                    .unwrap();
                max_err(&v, |r| 1.0 / r)
            })
            .collect();
        assert!(order(&errs) >= 1.9, "{errs:?}");
    }

    #[test]
    fn forced_log_profile() {
        let (p1, p0) = swirl_zero(-3.0);
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let g = Arc::new(RadialGrid::graded(100.0, n, 2.0).unwrap());
                let c = OdeCoefficients { p1: &*p1, p0: &*p0, shift: 0.0 };
                let v = fd_bvp_oracle(
                    &g,
                    &c,
                    &|s: f64| creal(s.powi(-4)),
                    creal(0.0),
                    DecayClass::Power(2.0 - 1.0 / 100f64.ln()),
                )
                .unwrap();
                max_err(&v, |r| r.ln() / (r * r))
            })
            .collect();
        assert!(order(&errs) >= 1.9, "{errs:?}");
    }

    #[test]
    fn bessel_homogeneous_solution() {
        let o = BesselOrder::new(1.0).unwrap();
        let k1 = |r: f64| bessel_k(o, r).unwrap().value();
        let errs: Vec<f64> = [256, 512, 1024]
            .iter()
            .map(|&n| {
                let g = Arc::new(RadialGrid::graded(100.0, n, 2.0).unwrap());
                let p1 = |r: f64| 1.0 / r;
                let p0 = |r: f64| -1.0 / (r * r);
                let c = OdeCoefficients { p1: &p1, p0: &p0, shift: 1.0 };
                let v = fd_bvp_oracle(
                    &g,
                    &c,
                    &|_| creal(0.0),
                    creal(1.0),
                    DecayClass::Exponential { rate: 1.0, power: -0.5 },
                )
                .unwrap();
                max_err(&v, |r| k1(r) / k1(1.0))
            })
            .collect();
        assert!(order(&errs) >= 1.9, "{errs:?}");
    }

    #[test]
    fn banded_solver_with_pivoting() {
        let mut m = Banded::<f64>::new(3, 1, 1);
        m.add(0, 1, creal(1.0));
        m.add(1, 0, creal(1.0));
        m.add(1, 2, creal(1.0));
        m.add(2, 2, creal(2.0));
        let x = m.solve(vec![creal(3.0), creal(5.0), creal(4.0)]).unwrap();
        assert!((x[0].re - 3.0).abs() < 1e-14);
        assert!((x[1].re - 3.0).abs() < 1e-14);
        assert!((x[2].re - 2.0).abs() < 1e-14);
    }
}
