//! Fourier representation in z: fields, boundary and forcing data, mode
//! convolution for the quadratic terms, and the data/solution norms.

mod convolve;
mod data;
mod field;
mod norms;

pub use convolve::{convolution_tail, convolve_product, Deriv, ModeSeries};
pub use data::{
    enorm, vnorm, BoundaryData, DecayExponents, ForcingData, RadialFn, RadialFunction,
};
pub use field::{Component, FourierField, ModeComponents};
pub use norms::{bnorm, sigma_regime};
