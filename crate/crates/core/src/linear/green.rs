//! Variation-of-parameters solver shared by every mode equation
//!   −(v″ + a/r·v′ − c/r²·v − κ²v) = f,   v(1) = g,   v → 0.
//!
//! With decaying/growing homogeneous solutions D, G, weight ρ and the
//! constant C = ρ(G′D − GD′),
//!   v = [D∫₁^r Gfρ + G∫_r^∞ Dfρ]/C + c·D.
//! Kernels are stored as mantissas D = d̂e^{−κr}, G = ĝe^{κr}; the
//! exponentials only ever enter as e^{−κ|r−s|} inside the quadrature.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::radial::{ExpQuadrature, RadialGrid};
use crate::scalar::Real;
use crate::special::{kernel_pair, KernelFamily};

#[derive(Clone, Debug)]
pub(crate) struct GreenTable<T> {
    pub kappa: T,
    /// d̂, d̂′, d̂″ per node
    pub dec: Vec<[T; 3]>,
    /// ĝ, ĝ′, ĝ″ per node
    pub gro: Vec<[T; 3]>,
    pub rho: Vec<T>,
    pub drho: Vec<T>,
    pub wronskian: T,
    /// e^{−κ(r_i−1)}
    pub damp: Vec<T>,
    pub quad: ExpQuadrature<T>,
}

/// The three derivatives of a profile as grid samples.
pub(crate) type Triple<T> = [Vec<Complex<T>>; 3];

impl<T: Real> GreenTable<T> {
    fn build(
        grid: &RadialGrid<T>,
        kappa: T,
        dec: Vec<[T; 3]>,
        gro: Vec<[T; 3]>,
        rho_power: T,
    ) -> Self {
        let r = grid.nodes();
        let rho: Vec<T> = r.iter().map(|&x| x.powf(rho_power)).collect();
        let drho = r.iter().zip(&rho).map(|(&x, &p)| rho_power * p / x).collect();
        let wronskian = rho[0] * (gro[0][1] * dec[0][0] - gro[0][0] * dec[0][1]);
        let damp = r.iter().map(|&x| (-kappa * (x - T::one())).exp()).collect();
        Self { kappa, dec, gro, rho, drho, wronskian, damp, quad: ExpQuadrature::new(grid, kappa) }
    }

    /// Modified-Bessel pair of `family` for mode k; ρ = r^{1−ν} (swirl,
    /// vorticity) or r (stream).
    pub fn bessel(grid: &RadialGrid<T>, k: i64, nu: T, family: KernelFamily) -> Result<Self> {
        let mut dec = Vec::with_capacity(grid.len());
        let mut gro = Vec::with_capacity(grid.len());
        for &r in grid.nodes() {
            let (kk, ii) = kernel_pair(k, nu, r, family)?;
            dec.push([kk.value, kk.d1, kk.d2]);
            gro.push([ii.value, ii.d1, ii.d2]);
        }
        let kappa = T::from_i64(k.abs()).expect("mode index fits scalar");
        let rho_power = match family {
            KernelFamily::Stream => T::one(),
            _ => T::one() - nu,
        };
        Ok(Self::build(grid, kappa, dec, gro, rho_power))
    }

    /// Pure power kernels D = r^p, G = r^q (κ = 0), weight ρ = r^{rho_power}.
    pub fn euler(grid: &RadialGrid<T>, p: T, q: T, rho_power: T) -> Self {
        let pw = |e: T, r: T| {
            let one = T::one();
            [r.powf(e), e * r.powf(e - one), e * (e - one) * r.powf(e - one - one)]
        };
        let dec = grid.nodes().iter().map(|&r| pw(p, r)).collect();
        let gro = grid.nodes().iter().map(|&r| pw(q, r)).collect();
        Self::build(grid, T::zero(), dec, gro, rho_power)
    }

    /// a = ĝρf (inner), b = d̂ρf (outer).
    pub fn sources(&self, f: &[Complex<T>]) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let a = f.iter().enumerate().map(|(i, &v)| v * (self.gro[i][0] * self.rho[i])).collect();
        let b = f.iter().enumerate().map(|(i, &v)| v * (self.dec[i][0] * self.rho[i])).collect();
        (a, b)
    }

    /// Sources for a forcing −f′ after integrating by parts:
    /// a = f·(ρĝ)′, b = f·(ρd̂)′ with (ρĝ)′ taken in mantissa form.
    pub fn sources_by_parts(&self, f: &[Complex<T>]) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let a = f
            .iter()
            .enumerate()
            .map(|(i, &v)| v * (self.drho[i] * self.gro[i][0] + self.rho[i] * self.gro[i][1]))
            .collect();
        let b = f
            .iter()
            .enumerate()
            .map(|(i, &v)| v * (self.drho[i] * self.dec[i][0] + self.rho[i] * self.dec[i][1]))
            .collect();
        (a, b)
    }

    /// P_i = ∫₁^{r_i} a e^{−κ(r_i−s)}, Q_i = ∫_{r_i}^∞ b e^{−κ(s−r_i)}.
    pub fn sweep(
        &self,
        grid: &RadialGrid<T>,
        a: &[Complex<T>],
        b: &[Complex<T>],
        b_decay: Option<T>,
    ) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
        let p = self.quad.cumulative_inner(a);
        let q = self.quad.cumulative_outer_closed(grid, b, b_decay)?;
        Ok((p, q))
    }

    /// (d̂P + ĝQ)/C and its first two derivatives, without the −f term of v″.
    pub fn combine(&self, p: &[Complex<T>], q: &[Complex<T>]) -> Triple<T> {
        let c = self.wronskian;
        let mut out: Triple<T> = [Vec::new(), Vec::new(), Vec::new()];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..p.len())
                .map(|i| (p[i] * self.dec[i][j] + q[i] * self.gro[i][j]) / c)
                .collect();
        }
        out
    }

    /// Decaying solution normalised to 1 at r = 1, with derivatives, at node i.
    pub fn homogeneous(&self, i: usize) -> [T; 3] {
        let s = self.damp[i] / self.dec[0][0];
        [self.dec[i][0] * s, self.dec[i][1] * s, self.dec[i][2] * s]
    }

    /// Exponent q with |d̂ρ| ~ r^q near R_max (for declaring tail decay).
    pub fn outer_weight_power(&self, grid: &RadialGrid<T>) -> T {
        let r = grid.nodes();
        let n = r.len();
        let w = |i: usize| (self.dec[i][0] * self.rho[i]).abs();
        (w(n - 1) / w(n - 2)).ln() / (r[n - 1] / r[n - 2]).ln()
    }

    /// Full Dirichlet solve of −(v″ + …) = f, v(1) = g.
    pub fn solve_dirichlet(
        &self,
        grid: &RadialGrid<T>,
        f: &[Complex<T>],
        f_decay: Option<T>,
        g: Complex<T>,
    ) -> Result<Triple<T>> {
        if f.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "forcing has {} samples, grid has {} nodes",
                f.len(),
                grid.len()
            )));
        }
        let (a, b) = self.sources(f);
        let decl = f_decay.map(|p| p - self.outer_weight_power(grid));
        let (p, q) = self.sweep(grid, &a, &b, decl)?;
        let mut v = self.combine(&p, &q);
        let c = g - v[0][0];
        for i in 0..v[0].len() {
            let h = self.homogeneous(i);
            for j in 0..3 {
                v[j][i] += c * h[j];
            }
            v[2][i] -= f[i];
        }
        Ok(v)
    }
}
