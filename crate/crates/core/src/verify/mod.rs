//! Independent checks of computed solutions: physical-space residuals,
//! decay fits and manufactured solutions.

mod decay;
mod manufactured;
mod residual;

pub use decay::{decay_fit, decay_fit_window, DecayFit};
pub use manufactured::{manufactured_run, ManufacturedCase, ManufacturedResult};
pub use residual::{field_decay_fits, residual_asns, ResidualReport};
