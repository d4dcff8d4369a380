use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialProfile};
use crate::scalar::{czero, int, Real};

/// Velocity component in cylindrical coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    R,
    Theta,
    Z,
}

impl Component {
    pub const ALL: [Component; 3] = [Component::R, Component::Theta, Component::Z];

    pub fn name(self) -> &'static str {
        match self {
            Component::R => "r",
            Component::Theta => "theta",
            Component::Z => "z",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "r" => Some(Component::R),
            "theta" => Some(Component::Theta),
            "z" => Some(Component::Z),
            _ => None,
        }
    }
}

/// The three radial profiles of one Fourier mode.
#[derive(Clone, Debug)]
pub struct ModeComponents<T> {
    pub r: RadialProfile<T>,
    pub theta: RadialProfile<T>,
    pub z: RadialProfile<T>,
}

impl<T: Real> ModeComponents<T> {
    pub fn zeros(grid: &Arc<RadialGrid<T>>) -> Self {
        Self {
            r: RadialProfile::zeros(grid),
            theta: RadialProfile::zeros(grid),
            z: RadialProfile::zeros(grid),
        }
    }

    pub fn get(&self, c: Component) -> &RadialProfile<T> {
        match c {
            Component::R => &self.r,
            Component::Theta => &self.theta,
            Component::Z => &self.z,
        }
    }

    pub fn get_mut(&mut self, c: Component) -> &mut RadialProfile<T> {
        match c {
            Component::R => &mut self.r,
            Component::Theta => &mut self.theta,
            Component::Z => &mut self.z,
        }
    }

    pub fn conj(&self) -> Self {
        Self { r: self.r.conj(), theta: self.theta.conj(), z: self.z.conj() }
    }

    fn axpby(&self, a: Complex<T>, o: &Self, b: Complex<T>) -> Self {
        Self {
            r: self.r.axpby(a, &o.r, b),
            theta: self.theta.axpby(a, &o.theta, b),
            z: self.z.axpby(a, &o.z, b),
        }
    }
}

/// Reduced velocity as Fourier modes k = −K..K in z.
///
/// The θ-profile of mode 0 holds only the o(1/r) part; the 1/r tail
/// coefficient σ, when the regime admits one, is kept in `sigma`.
#[derive(Clone, Debug)]
pub struct FourierField<T> {
    grid: Arc<RadialGrid<T>>,
    k_max: usize,
    modes: Vec<ModeComponents<T>>,
    pub sigma: Option<T>,
}

impl<T: Real> FourierField<T> {
    pub fn zeros(grid: &Arc<RadialGrid<T>>, k_max: usize) -> Self {
        Self {
            grid: grid.clone(),
            k_max,
            modes: (0..2 * k_max + 1).map(|_| ModeComponents::zeros(grid)).collect(),
            sigma: None,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid<T>> {
        &self.grid
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    fn slot(&self, k: i64) -> Result<usize> {
        let kk = self.k_max as i64;
        if k < -kk || k > kk {
            return Err(Error::Domain(format!("mode {k} outside [-{kk}, {kk}]")));
        }
        Ok((k + kk) as usize)
    }

    pub fn mode(&self, k: i64) -> &ModeComponents<T> {
        &self.modes[self.slot(k).expect("mode index in range")]
    }

    pub fn mode_mut(&mut self, k: i64) -> &mut ModeComponents<T> {
        let s = self.slot(k).expect("mode index in range");
        &mut self.modes[s]
    }

    /// Stores mode k and, for k ≠ 0, its conjugate at −k.
    pub fn set_real_mode(&mut self, k: i64, m: ModeComponents<T>) -> Result<()> {
        for c in Component::ALL {
            if !Arc::ptr_eq(&m.get(c).grid, &self.grid) && *m.get(c).grid != *self.grid {
                return Err(Error::GridMismatch("mode profile on a different grid".into()));
            }
        }
        let s = self.slot(k)?;
        if k != 0 {
            let t = self.slot(-k)?;
            self.modes[t] = m.conj();
        }
        self.modes[s] = m;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ModeComponents<T>)> {
        let kk = self.k_max as i64;
        self.modes.iter().enumerate().map(move |(i, m)| (i as i64 - kk, m))
    }

    pub fn is_zero(&self) -> bool {
        self.sigma.is_none_or(|s| s == T::zero())
            && self.modes.iter().all(|m| Component::ALL.iter().all(|&c| m.get(c).is_zero()))
    }

    /// `a·self + b·other`, including σ.
    pub fn axpby(&self, a: T, other: &Self, b: T) -> Result<Self> {
        if self.k_max != other.k_max || *self.grid != *other.grid {
            return Err(Error::GridMismatch("fields differ in grid or truncation".into()));
        }
        let (ca, cb) = (Complex::new(a, T::zero()), Complex::new(b, T::zero()));
        let sigma = match (self.sigma, other.sigma) {
            (None, None) => None,
            (x, y) => Some(a * x.unwrap_or(T::zero()) + b * y.unwrap_or(T::zero())),
        };
        Ok(Self {
            grid: self.grid.clone(),
            k_max: self.k_max,
            modes: self.modes.iter().zip(&other.modes).map(|(x, y)| x.axpby(ca, y, cb)).collect(),
            sigma,
        })
    }

    /// Largest |v_{−k} − conj(v_k)| over all modes and nodes.
    pub fn symmetry_defect(&self) -> T {
        let mut worst = T::zero();
        for k in 1..=self.k_max as i64 {
            for c in Component::ALL {
                let (p, m) = (&self.mode(k).get(c).values, &self.mode(-k).get(c).values);
                for (a, b) in p.iter().zip(m) {
                    worst = worst.max((a.conj() - b).norm());
                }
            }
        }
        worst
    }

    /// Velocity at (r, z): Σ_k v_k(r)e^{ikz} + σ/r e_θ, plus the background
    /// (ν/r, μ/r, 0) when `background` is given. Returns the complex sum so
    /// callers can check that its imaginary part vanishes.
    pub fn synthesize_complex(
        &self,
        r: T,
        z: T,
        background: Option<(T, T)>,
    ) -> Result<[Complex<T>; 3]> {
        let mut out = [czero::<T>(); 3];
        for (k, m) in self.iter() {
            let e = Complex::from_polar(T::one(), int::<T>(k) * z);
            for (slot, c) in Component::ALL.iter().enumerate() {
                out[slot] += m.get(*c).interpolate(r)? * e;
            }
        }
        if let Some(s) = self.sigma {
            out[1] += s / r;
        }
        if let Some((nu, mu)) = background {
            out[0] += nu / r;
            out[1] += mu / r;
        }
        Ok(out)
    }

    /// Real velocity (u_r, u_θ, u_z) at (r, z).
    pub fn synthesize(&self, r: T, z: T, background: Option<(T, T)>) -> Result<[T; 3]> {
        let c = self.synthesize_complex(r, z, background)?;
        Ok([c[0].re, c[1].re, c[2].re])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, creal};

    fn grid() -> Arc<RadialGrid<f64>> {
        Arc::new(RadialGrid::graded(50.0, 128, 2.0).unwrap())
    }

    #[test]
    fn background_only() {
        let f = FourierField::zeros(&grid(), 3);
        let u = f.synthesize(2.0, 0.7, Some((-1.5, 2.0))).unwrap();
        assert_eq!(u, [-0.75, 1.0, 0.0]);
    }

    #[test]
    fn single_mode_is_twice_real_part() {
        let g = grid();
        let mut f = FourierField::zeros(&g, 2);
        let mut m = ModeComponents::zeros(&g);
        m.theta = RadialProfile::from_fn(&g, |r| cplx(1.0 / r, 0.5 / (r * r)));
        f.set_real_mode(1, m).unwrap();
        let (r, z) = (g.nodes()[40], 1.3);
        let c = cplx(1.0 / r, 0.5 / (r * r));
        let u = f.synthesize_complex(r, z, Some((-1.0, 3.0))).unwrap();
        let exact = 2.0 * (c * Complex::from_polar(1.0, z)).re + 3.0 / r;
        assert!((u[1].re - exact).abs() < 1e-14);
        assert!(u[1].im.abs() < 1e-14);
        assert_eq!(f.symmetry_defect(), 0.0);
    }

    #[test]
    fn synthesis_matches_direct_summation() {
        let g = grid();
        let mut f = FourierField::zeros(&g, 3);
        for k in 0..=3i64 {
            let mut m = ModeComponents::zeros(&g);
            let kf = k as f64;
            m.r = RadialProfile::from_fn(&g, |r| cplx((kf + 1.0) / r, if k == 0 { 0.0 } else { kf / (r * r) }));
            m.z = RadialProfile::from_fn(&g, |r| creal((-kf * 0.1 * r).exp() / r));
            f.set_real_mode(k, m).unwrap();
        }
        f.sigma = Some(0.25);
        let r = g.nodes()[17];
        for j in 0..64 {
            let z = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            let u = f.synthesize(r, z, None).unwrap();
            let mut ur = 1.0 / r;
            let mut uz = 1.0 / r;
            for k in 1..=3 {
                let kf = k as f64;
                ur += 2.0 * ((kf + 1.0) / r * (kf * z).cos() - kf / (r * r) * (kf * z).sin());
                uz += 2.0 * (-kf * 0.1 * r).exp() / r * (kf * z).cos();
            }
            assert!((u[0] - ur).abs() < 1e-12);
            assert!((u[1] - 0.25 / r).abs() < 1e-15);
            assert!((u[2] - uz).abs() < 1e-12);
        }
    }

    #[test]
    fn out_of_range_radius() {
        let f = FourierField::zeros(&grid(), 1);
        assert!(f.synthesize(0.5, 0.0, None).is_err());
        assert!(f.synthesize(60.0, 0.0, None).is_err());
    }
}
