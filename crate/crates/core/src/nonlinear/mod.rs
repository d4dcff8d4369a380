//! Quadratic right-hand sides, the Picard iteration, the two-solution
//! construction for ν < −2 and the empirical smallness calibration.

mod calibrate;
mod nonunique;
mod picard;
mod rhs;
mod tau;

pub use calibrate::{calibrate_threshold, Calibration, CalibrationCache};
pub use nonunique::{nonuniqueness_pair, SeparationReport};
pub use picard::{
    contraction_estimate, picard_solve, IterationState, Norms, SolutionBundle, SolverConfig,
};
pub use rhs::{add_mu_coupling, assemble_rhs, RhsModes, SampledForcing};
pub use tau::{compute_tau, compute_tau_for, TauInfo};
