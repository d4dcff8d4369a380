use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::field::Component;
use crate::error::{Error, Result};
use crate::radial::{weighted_sup_values, RadialGrid};
use crate::scalar::{creal, czero, int, to_f64, Real};

/// Fourier coefficients of the boundary perturbation, k ↦ g_{j,k}.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData<T> {
    coeffs: BTreeMap<(Component, i64), Complex<T>>,
}

impl<T: Real> Default for BoundaryData<T> {
    fn default() -> Self {
        Self { coeffs: BTreeMap::new() }
    }
}

impl<T: Real> BoundaryData<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, c: Component, k: i64, v: Complex<T>) {
        self.coeffs.insert((c, k), v);
    }

    /// Coefficient of a real boundary function: stores k and conj at −k.
    pub fn set_real_mode(&mut self, c: Component, k: i64, v: Complex<T>) {
        if k == 0 {
            self.set(c, 0, creal(v.re));
        } else {
            self.set(c, k, v);
            self.set(c, -k, v.conj());
        }
    }

    pub fn get(&self, c: Component, k: i64) -> Complex<T> {
        self.coeffs.get(&(c, k)).copied().unwrap_or_else(czero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Component, i64, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(&(c, k), &v)| (c, k, v))
    }

    pub fn max_mode(&self) -> i64 {
        self.coeffs.keys().map(|&(_, k)| k.abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&key, &v)| (key, v * a)).collect() }
    }

    /// g_{r,0} = 0 is the normalisation the formulation rests on (the net
    /// radial flux is carried entirely by ν).
    pub fn validate(&self) -> Result<()> {
        if self.get(Component::R, 0).norm() != T::zero() {
            return Err(Error::Config(
                "boundary r.0 must be zero: the radial flux through r = 1 is carried by ν \
                 (normalisation g_{r,0} = 0)"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Σ (1 + k²)|g_{j,k}| over the stored coefficients.
    pub fn vnorm(&self) -> T {
        self.coeffs
            .iter()
            .map(|(&(_, k), v)| (T::one() + int::<T>(k * k)) * v.norm())
            .sum()
    }
}

pub fn vnorm<T: Real>(g: &BoundaryData<T>) -> T {
    g.vnorm()
}

pub type RadialFn<T> = Arc<dyn Fn(T) -> Complex<T> + Send + Sync>;

/// A radial forcing profile that can be evaluated at any r ≥ 1.
#[derive(Clone)]
pub enum RadialFunction<T> {
    /// A·r^{−p}
    PowerDecay { amplitude: Complex<T>, exponent: T },
    /// A·r^{−p}·e^{−rate·(r−1)}
    PowerExpDecay { amplitude: Complex<T>, exponent: T, rate: T },
    /// Arbitrary closure with optional derivative and declared decay exponent.
    Custom { f: RadialFn<T>, df: Option<RadialFn<T>>, decay: Option<T> },
}

impl<T: Real> fmt::Debug for RadialFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialFunction::PowerDecay { amplitude, exponent } => {
                write!(f, "power_decay({amplitude}, {exponent})")
            }
            RadialFunction::PowerExpDecay { amplitude, exponent, rate } => {
                write!(f, "power_exp_decay({amplitude}, {exponent}, {rate})")
            }
            RadialFunction::Custom { decay, .. } => write!(f, "custom(decay={decay:?})"),
        }
    }
}

impl<T: Real> RadialFunction<T> {
    pub fn custom(f: impl Fn(T) -> Complex<T> + Send + Sync + 'static, decay: Option<T>) -> Self {
        RadialFunction::Custom { f: Arc::new(f), df: None, decay }
    }

    pub fn custom_with_derivative(
        f: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
        df: impl Fn(T) -> Complex<T> + Send + Sync + 'static,
        decay: Option<T>,
    ) -> Self {
        RadialFunction::Custom { f: Arc::new(f), df: Some(Arc::new(df)), decay }
    }

    pub fn eval(&self, r: T) -> Complex<T> {
        match self {
            RadialFunction::PowerDecay { amplitude, exponent } => *amplitude * r.powf(-*exponent),
            RadialFunction::PowerExpDecay { amplitude, exponent, rate } => {
                *amplitude * (r.powf(-*exponent) * (-*rate * (r - T::one())).exp())
            }
            RadialFunction::Custom { f, .. } => f(r),
        }
    }

    pub fn derivative(&self, r: T) -> Option<Complex<T>> {
        match self {
            RadialFunction::PowerDecay { exponent, .. } => Some(self.eval(r) * (-*exponent / r)),
            RadialFunction::PowerExpDecay { exponent, rate, .. } => {
                Some(self.eval(r) * (-*exponent / r - *rate))
            }
            RadialFunction::Custom { df, .. } => df.as_ref().map(|d| d(r)),
        }
    }

    /// Declared power-law decay exponent (for exponential families, the
    /// algebraic prefactor's exponent, a lower bound on the true rate).
    pub fn decay(&self) -> Option<T> {
        match self {
            RadialFunction::PowerDecay { exponent, .. } => Some(*exponent),
            RadialFunction::PowerExpDecay { .. } => None,
            RadialFunction::Custom { decay, .. } => *decay,
        }
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self, RadialFunction::PowerExpDecay { .. })
    }

    pub fn conj(&self) -> Self {
        match self {
            RadialFunction::PowerDecay { amplitude, exponent } => {
                RadialFunction::PowerDecay { amplitude: amplitude.conj(), exponent: *exponent }
            }
            RadialFunction::PowerExpDecay { amplitude, exponent, rate } => {
                RadialFunction::PowerExpDecay {
                    amplitude: amplitude.conj(),
                    exponent: *exponent,
                    rate: *rate,
                }
            }
            RadialFunction::Custom { f, df, decay } => {
                let f = f.clone();
                let df = df.clone();
                RadialFunction::Custom {
                    f: Arc::new(move |r| f(r).conj()),
                    df: df.map(|d| Arc::new(move |r| d(r).conj()) as RadialFn<T>),
                    decay: *decay,
                }
            }
        }
    }

    pub fn scaled(&self, a: T) -> Self {
        match self {
            RadialFunction::PowerDecay { amplitude, exponent } => {
                RadialFunction::PowerDecay { amplitude: *amplitude * a, exponent: *exponent }
            }
            RadialFunction::PowerExpDecay { amplitude, exponent, rate } => {
                RadialFunction::PowerExpDecay {
                    amplitude: *amplitude * a,
                    exponent: *exponent,
                    rate: *rate,
                }
            }
            RadialFunction::Custom { f, df, decay } => {
                let f = f.clone();
                let df = df.clone();
                RadialFunction::Custom {
                    f: Arc::new(move |r| f(r) * a),
                    df: df.map(|d| Arc::new(move |r| d(r) * a) as RadialFn<T>),
                    decay: *decay,
                }
            }
        }
    }
}

/// Decay exponents (λ_θ, λ_z, λ) of the forcing class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayExponents<T> {
    pub lambda_theta: T,
    pub lambda_z: T,
    pub lambda: T,
}

impl<T: Real> DecayExponents<T> {
    /// Weight attached to forcing component `c` of mode `k`.
    pub fn weight(&self, c: Component, k: i64) -> T {
        match (c, k) {
            (Component::Theta, 0) => self.lambda_theta,
            (Component::Z, 0) => self.lambda_z,
            _ => self.lambda,
        }
    }
}

/// Per-mode radial forcing f_{j,k}(r).
#[derive(Clone)]
pub struct ForcingData<T> {
    modes: BTreeMap<(Component, i64), RadialFunction<T>>,
}

impl<T: Real> fmt::Debug for ForcingData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.modes.iter()).finish()
    }
}

impl<T: Real> Default for ForcingData<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> ForcingData<T> {
    pub fn zero() -> Self {
        Self { modes: BTreeMap::new() }
    }

    pub fn set(&mut self, c: Component, k: i64, f: RadialFunction<T>) {
        self.modes.insert((c, k), f);
    }

    /// Mode of a real forcing: stores k and the conjugate at −k.
    pub fn set_real_mode(&mut self, c: Component, k: i64, f: RadialFunction<T>) {
        if k != 0 {
            self.modes.insert((c, -k), f.conj());
        }
        self.modes.insert((c, k), f);
    }

    pub fn get(&self, c: Component, k: i64) -> Option<&RadialFunction<T>> {
        self.modes.get(&(c, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Component, i64, &RadialFunction<T>)> + '_ {
        self.modes.iter().map(|(&(c, k), f)| (c, k, f))
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn max_mode(&self) -> i64 {
        self.modes.keys().map(|&(_, k)| k.abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self { modes: self.modes.iter().map(|(&key, f)| (key, f.scaled(a))).collect() }
    }

    /// Samples of f_{c,k} on the grid (zeros when the mode is absent).
    pub fn sample(&self, c: Component, k: i64, grid: &RadialGrid<T>) -> Vec<Complex<T>> {
        match self.get(c, k) {
            Some(f) => grid.nodes().iter().map(|&r| f.eval(r)).collect(),
            None => vec![czero(); grid.len()],
        }
    }

    /// Every power-law forcing must decay at least as fast as its class
    /// exponent, or its weighted norm is infinite. f_{r,0} is exempt.
    pub fn validate(&self, lam: &DecayExponents<T>) -> Result<()> {
        for (&(c, k), f) in &self.modes {
            if c == Component::R && k == 0 {
                continue;
            }
            if let RadialFunction::PowerDecay { exponent, .. } = f {
                let need = lam.weight(c, k);
                if *exponent < need {
                    return Err(Error::Config(format!(
                        "forcing {}.{k} decays like r^-{} but the forcing class requires \
                         an exponent of at least {}",
                        c.name(),
                        to_f64(*exponent),
                        to_f64(need)
                    )));
                }
            }
        }
        Ok(())
    }

    /// ‖f_{θ,0}‖_{λ_θ} + ‖f_{z,0}‖_{λ_z} + Σ_{k≠0,j} ‖f_{j,k}‖_λ, suprema over grid nodes.
    pub fn enorm(&self, grid: &RadialGrid<T>, lam: &DecayExponents<T>) -> T {
        let mut total = T::zero();
        for &(c, k) in self.modes.keys() {
            if k == 0 && c == Component::R {
                continue;
            }
            let s = self.sample(c, k, grid);
            total += weighted_sup_values(grid, &s, lam.weight(c, k)).value;
        }
        total
    }
}

pub fn enorm<T: Real>(f: &ForcingData<T>, grid: &RadialGrid<T>, lam: &DecayExponents<T>) -> T {
    f.enorm(grid, lam)
}
