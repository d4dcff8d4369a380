//! Per-mode linear solve operator with kernel tables cached for a fixed
//! (grid, ν, K).

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::green::GreenTable;
use super::meridional::{
    meridional_with, ClosureCoefficients, FzPath, MeridionalModeSolution, MeridionalTables,
};
use super::swirl::swirl_with;
use super::zero::{zero_swirl_with, zero_vertical_kernel, zero_vertical_with, ZeroSwirlKernel};
use super::Source;
use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialProfile};
use crate::scalar::{czero, to_f64, Real};
use crate::special::KernelFamily;

/// All components of one solved mode. For k = 0, `v_theta` is the regular
/// part 𝑣 (σ/r is carried by the field), w_0 = −v_{z,0}′ and φ_0 ≡ 0.
#[derive(Clone, Debug)]
pub struct ModeSolution<T> {
    pub k: i64,
    pub v_r: RadialProfile<T>,
    pub v_theta: RadialProfile<T>,
    pub v_z: RadialProfile<T>,
    pub w: RadialProfile<T>,
    pub phi: RadialProfile<T>,
    /// Zero mode only, −2 ≤ ν < 0 only.
    pub sigma: Option<T>,
    /// Nonzero modes only.
    pub closure: Option<ClosureCoefficients<T>>,
}

struct NonzeroTables<T> {
    swirl: GreenTable<T>,
    meridional: MeridionalTables<T>,
}

/// Linear solve operator for modes |k| ≤ K.
pub struct ModeOperator<T> {
    grid: Arc<RadialGrid<T>>,
    nu: T,
    k_max: usize,
    zero_swirl: ZeroSwirlKernel<T>,
    zero_vertical: GreenTable<T>,
    /// index |k| − 1
    nonzero: Vec<NonzeroTables<T>>,
}

impl<T: Real> ModeOperator<T> {
    pub fn new(grid: &Arc<RadialGrid<T>>, nu: T, k_max: usize) -> Result<Self> {
        if !(nu < T::zero()) || !nu.is_finite() {
            return Err(Error::Domain(format!("ν < 0 required, got {}", to_f64(nu))));
        }
        let nonzero = (1..=k_max as i64)
            .into_par_iter()
            .map(|k| {
                Ok(NonzeroTables {
                    swirl: GreenTable::bessel(grid, k, nu, KernelFamily::Swirl)?,
                    meridional: MeridionalTables::new(grid, k, nu)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: grid.clone(),
            nu,
            k_max,
            zero_swirl: ZeroSwirlKernel::new(grid, nu),
            zero_vertical: zero_vertical_kernel(grid, nu),
            nonzero,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Zero mode; `f_r` is not used (absorbed into pressure) and g_{r,0} must be 0.
    pub fn solve_zero(
        &self,
        f_theta: &Source<T>,
        f_z: &Source<T>,
        g_theta: T,
        g_z: T,
    ) -> Result<ModeSolution<T>> {
        let g = &self.grid;
        let sw = zero_swirl_with(&self.zero_swirl, g, self.nu, f_theta, g_theta)?;
        let (v_r, v_z) = zero_vertical_with(&self.zero_vertical, g, self.nu, f_z, g_z)?;
        let w_vals: Vec<_> = v_z.d1()?.iter().map(|&x| -x).collect();
        let w_d1: Vec<_> = v_z.d2()?.iter().map(|&x| -x).collect();
        let mut w = RadialProfile::from_values(g, w_vals);
        w.d1 = Some(w_d1);
        Ok(ModeSolution {
            k: 0,
            v_r,
            v_theta: sw.v_regular,
            v_z,
            w,
            phi: RadialProfile::zeros(g),
            sigma: sw.sigma,
            closure: None,
        })
    }

    fn tables(&self, k: i64) -> Result<&NonzeroTables<T>> {
        let idx = k.unsigned_abs() as usize;
        if k == 0 || idx > self.k_max {
            return Err(Error::Domain(format!("mode {k} outside 0 < |k| ≤ {}", self.k_max)));
        }
        Ok(&self.nonzero[idx - 1])
    }

    /// Swirl component of mode 0 < |k| ≤ K.
    pub fn solve_swirl(&self, k: i64, f_theta: &Source<T>, g_theta: Complex<T>) -> Result<RadialProfile<T>> {
        swirl_with(&self.tables(k)?.swirl, &self.grid, f_theta, g_theta)
    }

    /// Meridional components of mode 0 < |k| ≤ K. The f_z′ term is taken
    /// from `f_z.d1` when present and integrated by parts otherwise.
    pub fn solve_meridional(
        &self,
        k: i64,
        f_r: &Source<T>,
        f_z: &Source<T>,
        g_r: Complex<T>,
        g_z: Complex<T>,
    ) -> Result<MeridionalModeSolution<T>> {
        let path = if f_z.d1.is_some() { FzPath::Direct } else { FzPath::ByParts };
        meridional_with(&self.tables(k)?.meridional, &self.grid, k, f_r, f_z, g_r, g_z, path)
    }

    /// Nonzero mode 0 < |k| ≤ K.
    #[allow(clippy::too_many_arguments)]
    pub fn solve_mode(
        &self,
        k: i64,
        f_r: &Source<T>,
        f_theta: &Source<T>,
        f_z: &Source<T>,
        g_r: Complex<T>,
        g_theta: Complex<T>,
        g_z: Complex<T>,
    ) -> Result<ModeSolution<T>> {
        let v_theta = self.solve_swirl(k, f_theta, g_theta)?;
        let m = self.solve_meridional(k, f_r, f_z, g_r, g_z)?;
        Ok(ModeSolution::from_parts(k, v_theta, m))
    }

    /// Homogeneous solve (zero forcing) of mode k with the given boundary values.
    pub fn solve_boundary_only(
        &self,
        k: i64,
        g_r: Complex<T>,
        g_theta: Complex<T>,
        g_z: Complex<T>,
    ) -> Result<ModeSolution<T>> {
        let z = Source::zeros(self.grid.len());
        if k == 0 {
            if g_r.norm() > T::zero() {
                return Err(Error::Domain("g_{r,0} = 0 required".into()));
            }
            self.solve_zero(&z, &z, g_theta.re, g_z.re)
        } else {
            self.solve_mode(k, &z, &z, &z, g_r, g_theta, g_z)
        }
    }
}

impl<T: Real> ModeSolution<T> {
    pub fn from_parts(k: i64, v_theta: RadialProfile<T>, m: MeridionalModeSolution<T>) -> Self {
        Self {
            k,
            v_r: m.v_r,
            v_theta,
            v_z: m.v_z,
            w: m.w,
            phi: m.phi,
            sigma: None,
            closure: Some(m.closure),
        }
    }

    pub fn zeros(grid: &Arc<RadialGrid<T>>, k: i64) -> Self {
        Self {
            k,
            v_r: RadialProfile::zeros(grid),
            v_theta: RadialProfile::zeros(grid),
            v_z: RadialProfile::zeros(grid),
            w: RadialProfile::zeros(grid),
            phi: RadialProfile::zeros(grid),
            sigma: None,
            closure: None,
        }
    }

    /// Boundary values (v_r, v_θ, v_z) at r = 1, σ included.
    pub fn boundary(&self) -> [Complex<T>; 3] {
        let s = self.sigma.map(crate::scalar::creal).unwrap_or_else(czero);
        [self.v_r.values[0], self.v_theta.values[0] + s, self.v_z.values[0]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{solve_meridional_mode, solve_swirl_mode, solve_zero_swirl};
    use crate::scalar::{cplx, creal};

    fn grid() -> Arc<RadialGrid<f64>> {
        Arc::new(RadialGrid::graded(100.0, 512, 2.0).unwrap())
    }

    #[test]
    fn cached_operator_matches_standalone_solvers() {
        let g = grid();
        let nu = -1.0;
        let op = ModeOperator::new(&g, nu, 3).unwrap();
        let f = Source::from_fn(&g, |s| creal(s.powi(-4)), Some(4.0));
        let zero = op.solve_zero(&f, &Source::zeros(g.len()), 0.5, 0.0).unwrap();
        let direct = solve_zero_swirl(&g, nu, &f, 0.5).unwrap();
        assert_eq!(zero.sigma, direct.sigma);
        assert_eq!(zero.v_theta.values, direct.v_regular.values);

        let fr = Source::from_fn(&g, |s| cplx(0.0, s.powi(-3)), Some(3.0));
        let m = op.solve_mode(-2, &fr, &f, &f, cplx(0.1, 0.0), cplx(0.0, 0.2), cplx(0.3, 0.1)).unwrap();
        let sw = solve_swirl_mode(&g, -2, nu, &f, cplx(0.0, 0.2)).unwrap();
        let me = solve_meridional_mode(&g, -2, nu, &fr, &f, cplx(0.1, 0.0), cplx(0.3, 0.1)).unwrap();
        assert_eq!(m.v_theta.values, sw.values);
        assert_eq!(m.v_r.values, me.v_r.values);
        assert_eq!(m.v_z.values, me.v_z.values);
    }

    #[test]
    fn boundary_values_reproduced() {
        let g = grid();
        let op = ModeOperator::new(&g, -3.0, 2).unwrap();
        let b = [cplx(0.1, -0.1), cplx(0.2, 0.05), cplx(-0.3, 0.0)];
        let s = op.solve_boundary_only(1, b[0], b[1], b[2]).unwrap();
        for (x, y) in s.boundary().iter().zip(&b) {
            assert!((x - y).norm() < 1e-10);
        }
        let s0 = op.solve_boundary_only(0, czero(), creal(0.4), creal(0.2)).unwrap();
        assert!((s0.boundary()[1] - creal(0.4)).norm() < 1e-12);
        assert!(op.solve_boundary_only(0, creal(0.1), czero(), czero()).is_err());
        assert!(op.solve_mode(3, &Source::zeros(g.len()), &Source::zeros(g.len()), &Source::zeros(g.len()), czero(), czero(), czero()).is_err());
    }
}
