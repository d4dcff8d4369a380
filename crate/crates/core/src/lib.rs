//! Spectral solver for steady axisymmetric Navier–Stokes flow in the exterior
//! of a 2π-periodic unit cylinder, perturbing the exact background
//! `(ν/r)e_r + (μ/r)e_θ`.
//!
//! Each z-Fourier mode of the reduced velocity is obtained from closed-form
//! Green's representations (Euler kernels for k = 0, modified Bessel kernels
//! for k ≠ 0); the quadratic coupling is resolved by Picard iteration.
//!
//! The numerics are generic over [`Real`] (`f32`/`f64`); the aliases at the
//! crate root fix `f64`, which is what the CLI and the tolerances assume.

// `!(x > y)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod scalar;
pub mod radial;
pub mod special;
pub mod linear;
pub mod nonlinear;
pub mod verify;
pub mod config;
pub mod output;
pub mod run;

#[cfg(test)]
pub(crate) mod test_oracles;

pub use error::{Error, ErrorClass, Result};
pub use scalar::Real;

/// `f64` instantiations used by the command-line driver.
pub type Grid = radial::RadialGrid<f64>;
pub type Profile = radial::RadialProfile<f64>;
pub type Field = fourier::FourierField<f64>;
pub type Boundary = fourier::BoundaryData<f64>;
pub type Forcing = fourier::ForcingData<f64>;
pub type Decay = fourier::DecayExponents<f64>;
pub type Config = nonlinear::SolverConfig<f64>;
pub type Solution = nonlinear::SolutionBundle<f64>;
pub type Separation = nonlinear::SeparationReport<f64>;
pub type Residuals = verify::ResidualReport<f64>;
