//! Linear mode solvers: zero-mode swirl and vertical flow (Euler kernels),
//! nonzero-mode swirl and meridional flow (modified Bessel kernels), and
//! pressure recovery.

mod green;
mod meridional;
mod operator;
mod pressure;
mod swirl;
mod zero;

use num_complex::Complex;

use crate::fourier::RadialFunction;
use crate::radial::RadialGrid;
use crate::scalar::{czero, Real};

pub use meridional::{solve_meridional_mode, solve_meridional_mode_direct, ClosureCoefficients, MeridionalModeSolution};
pub use operator::{ModeOperator, ModeSolution};
pub use pressure::{recover_pressure, recover_pressure_zero};
pub use swirl::solve_swirl_mode;
pub use zero::{solve_zero_meridional, solve_zero_swirl, ZeroModeSwirlSolution};

/// Grid samples of a forcing profile, with optional r-derivative and the
/// declared decay exponent used for tail closure.
#[derive(Clone, Debug, PartialEq)]
pub struct Source<T> {
    pub values: Vec<Complex<T>>,
    pub d1: Option<Vec<Complex<T>>>,
    pub decay: Option<T>,
}

impl<T: Real> Source<T> {
    pub fn zeros(n: usize) -> Self {
        Self { values: vec![czero(); n], d1: None, decay: None }
    }

    pub fn from_values(values: Vec<Complex<T>>, decay: Option<T>) -> Self {
        Self { values, d1: None, decay }
    }

    pub fn from_fn(grid: &RadialGrid<T>, f: impl Fn(T) -> Complex<T>, decay: Option<T>) -> Self {
        Self::from_values(grid.nodes().iter().map(|&r| f(r)).collect(), decay)
    }

    /// Samples a forcing family, including its derivative when known.
    pub fn sample(grid: &RadialGrid<T>, f: &RadialFunction<T>) -> Self {
        let r = grid.nodes();
        let d1 = r.iter().map(|&x| f.derivative(x)).collect::<Option<Vec<_>>>();
        Self { values: r.iter().map(|&x| f.eval(x)).collect(), d1, decay: f.decay() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == T::zero())
    }
}
