//! Graded radial grid, quadrature, differentiation, norms and the
//! finite-difference boundary-value oracle.

mod diff;
mod grid;
mod norm;
mod oracle;
mod quad;

pub use diff::{fornberg_weights, DiffOperator};
pub use grid::{RadialGrid, RadialProfile};
pub use norm::{loglog_fit, weighted_sup, weighted_sup_values, WeightedNorm};
pub use oracle::{
    fd_bvp_oracle, fd_stream_vorticity_oracle, CoupledOracleSolution, DecayClass, OdeCoefficients,
};
pub use quad::{
    fit_decay_exponent, integrate_inner, integrate_outer, tail_integral, ExpQuadrature,
};
