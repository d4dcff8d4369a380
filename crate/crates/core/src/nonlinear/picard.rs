//! Picard iteration v̄ ↦ v for the reduced system.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::rhs::{add_mu_coupling, assemble_rhs, RhsModes, SampledForcing};
use super::tau::{compute_tau, TauInfo};
use crate::error::{Error, Result};
use crate::fourier::{
    bnorm, BoundaryData, Component, DecayExponents, ForcingData, FourierField, ModeComponents,
};
use crate::linear::{ModeOperator, ModeSolution};
use crate::radial::{RadialGrid, RadialProfile};
use crate::scalar::{int, lit, to_f64, Real};
use crate::verify::{residual_asns, ResidualReport};

/// Numerical and physical parameters of one solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    pub nu: T,
    pub mu: T,
    pub k_max: usize,
    pub r_max: T,
    pub n_radial: usize,
    pub grid_gamma: T,
    pub decay: DecayExponents<T>,
    pub tol_picard: T,
    pub max_iters: usize,
    /// Under-relaxation ω ∈ (0, 1]; 1 is plain Picard.
    pub relaxation: T,
    /// Data size above which a warning is issued.
    pub smallness: Option<T>,
    /// z-samples for the residual check; 0 selects 4K + 1.
    pub z_samples: usize,
    /// One linear solve (quadratic terms dropped); admits λ ∈ (1, 3/2].
    pub linear_only: bool,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(nu: T, mu: T) -> Self {
        Self {
            nu,
            mu,
            k_max: 8,
            r_max: int(100),
            n_radial: 1024,
            grid_gamma: int(2),
            decay: DecayExponents { lambda_theta: int(4), lambda_z: int(3), lambda: int(2) },
            tol_picard: lit(1e-12),
            max_iters: 50,
            relaxation: T::one(),
            smallness: None,
            z_samples: 0,
            linear_only: false,
        }
    }

    pub fn z_samples_or_default(&self) -> usize {
        if self.z_samples == 0 {
            4 * self.k_max + 1
        } else {
            self.z_samples
        }
    }

    pub fn grid(&self) -> Result<Arc<RadialGrid<T>>> {
        Ok(Arc::new(RadialGrid::graded(self.r_max, self.n_radial, self.grid_gamma)?))
    }

    /// τ for this configuration. Linear-only runs accept λ ∈ (1, 3/2], where
    /// the index can be nonpositive; it is then only used as a norm weight.
    pub fn tau(&self) -> Result<TauInfo<T>> {
        let d = &self.decay;
        if self.linear_only && d.lambda > T::one() {
            let lam = d.lambda.max(lit::<T>(1.5) + lit::<T>(1e-9));
            let t = compute_tau(self.nu, d.lambda_theta, d.lambda_z, lam)?;
            let tau = t.tau.min(d.lambda - lit(1.5));
            return Ok(TauInfo { tau, ..t });
        }
        compute_tau(self.nu, d.lambda_theta, d.lambda_z, d.lambda)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.relaxation > T::zero() && self.relaxation <= T::one()) {
            return Err(Error::Config("relaxation must lie in (0, 1]".into()));
        }
        if !(self.tol_picard > T::zero()) || self.max_iters == 0 {
            return Err(Error::Config("tol_picard > 0 and max_iters ≥ 1 required".into()));
        }
        self.tau().map(|_| ())
    }
}

/// Iteration history.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationState<T> {
    pub iterations: usize,
    /// ‖v⁽ⁿ⁾ − v⁽ⁿ⁻¹⁾‖ in the solution norm.
    pub diff_norm_history: Vec<T>,
    /// ‖v⁽ⁿ⁾‖ per iterate.
    pub norm_history: Vec<T>,
    pub contraction_estimate: T,
    pub converged: bool,
}

/// Data and solution norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms<T> {
    /// Boundary data norm.
    pub data_v: T,
    /// Forcing norm.
    pub data_e: T,
    /// Solution norm.
    pub solution_b: T,
    /// ‖v‖/(‖f‖ + ‖g‖), zero for zero data.
    pub c_emp: T,
}

#[derive(Clone, Debug)]
pub struct SolutionBundle<T> {
    /// Reduced solution; u = (ν/r)e_r + (μ/r)e_θ + v.
    pub v: FourierField<T>,
    /// w_k, k = 0..K.
    pub vorticity: Vec<RadialProfile<T>>,
    /// φ_k, k = 0..K.
    pub stream: Vec<RadialProfile<T>>,
    pub nu: T,
    pub mu: T,
    pub tau: TauInfo<T>,
    pub norms: Norms<T>,
    pub state: IterationState<T>,
    /// f̄_{r,0} of the last step, absorbed into the zero-mode pressure.
    pub discarded_r0: Vec<Complex<T>>,
    pub residual_report: Option<ResidualReport<T>>,
    pub warnings: Vec<String>,
}

impl<T: Real> SolutionBundle<T> {
    /// Iterates stayed within 2·C_emp·(‖f‖ + ‖g‖).
    pub fn ball_invariant(&self) -> bool {
        let bound = int::<T>(2) * self.norms.c_emp * (self.norms.data_e + self.norms.data_v);
        self.state.norm_history.iter().all(|&x| x <= bound * (T::one() + lit(1e-12)))
    }
}

/// Geometric mean of the successive ratios among the last three distances.
pub fn contraction_estimate<T: Real>(hist: &[T]) -> T {
    let tail = &hist[hist.len().saturating_sub(3)..];
    let ratios: Vec<T> = tail
        .windows(2)
        .filter(|w| w[0] > T::zero())
        .map(|w| w[1] / w[0])
        .collect();
    if ratios.is_empty() {
        return T::zero();
    }
    let n = int::<T>(ratios.len() as i64);
    if ratios.iter().any(|&x| x == T::zero()) {
        return T::zero();
    }
    (ratios.iter().map(|x| x.ln()).sum::<T>() / n).exp()
}

/// Distances grew over each of the last three steps.
fn diverging<T: Real>(hist: &[T]) -> bool {
    hist.len() >= 4 && hist[hist.len() - 4..].windows(2).all(|w| w[1] > w[0])
}

/// The linear solve of one Picard step: given f̄, returns the new iterate,
/// with w_k and φ_k on the side.
pub(crate) fn linear_step<T: Real>(
    op: &ModeOperator<T>,
    rhs: &RhsModes<T>,
    g: &BoundaryData<T>,
    mu: T,
) -> Result<(FourierField<T>, Vec<RadialProfile<T>>, Vec<RadialProfile<T>>)> {
    let k_max = op.k_max() as i64;
    let sols: Vec<ModeSolution<T>> = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let ku = k as usize;
            if k == 0 {
                let gt = g.get(Component::Theta, 0).re;
                let gz = g.get(Component::Z, 0).re;
                return op.solve_zero(&rhs.theta[0], &rhs.z[0], gt, gz);
            }
            let v_theta = op.solve_swirl(k, &rhs.theta[ku], g.get(Component::Theta, k))?;
            let mut f_r = rhs.r[ku].clone();
            add_mu_coupling(&mut f_r, mu, &v_theta);
            let m = op.solve_meridional(
                k,
                &f_r,
                &rhs.z[ku],
                g.get(Component::R, k),
                g.get(Component::Z, k),
            )?;
            Ok(ModeSolution::from_parts(k, v_theta, m))
        })
        .collect::<Result<_>>()?;
    let grid = op.grid();
    let mut v = FourierField::zeros(grid, op.k_max());
    let mut w = Vec::with_capacity(sols.len());
    let mut phi = Vec::with_capacity(sols.len());
    for s in sols {
        if s.k == 0 {
            v.sigma = s.sigma;
        }
        v.set_real_mode(s.k, ModeComponents { r: s.v_r, theta: s.v_theta, z: s.v_z })?;
        w.push(s.w);
        phi.push(s.phi);
    }
    Ok((v, w, phi))
}

/// Runs the iteration from v⁽⁰⁾ = 0 until consecutive iterates are within
/// `tol_picard`. Divergence aborts; hitting `max_iters` returns the last
/// iterate with `converged = false`.
pub fn picard_solve<T: Real>(
    config: &SolverConfig<T>,
    f: &ForcingData<T>,
    g: &BoundaryData<T>,
) -> Result<SolutionBundle<T>> {
    config.validate()?;
    g.validate()?;
    f.validate(&config.decay)?;
    let tau = config.tau()?;
    let grid = config.grid()?;
    let op = ModeOperator::new(&grid, config.nu, config.k_max)?;
    picard_with(config, &op, tau, f, g)
}

pub(crate) fn picard_with<T: Real>(
    config: &SolverConfig<T>,
    op: &ModeOperator<T>,
    tau: TauInfo<T>,
    f: &ForcingData<T>,
    g: &BoundaryData<T>,
) -> Result<SolutionBundle<T>> {
    let grid = op.grid().clone();
    let (nu, mu) = (config.nu, config.mu);
    let mut warnings = Vec::new();
    if g.max_mode() > config.k_max as i64 {
        warnings.push(format!("boundary modes above K = {} are ignored", config.k_max));
    }
    let data_v = g.vnorm();
    let data_e = f.enorm(&grid, &config.decay);
    if let Some(eps) = config.smallness {
        if data_v + data_e > eps {
            let msg = format!(
                "data size {:.3e} exceeds the smallness threshold {:.3e}",
                to_f64(data_v + data_e),
                to_f64(eps)
            );
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    let forcing = SampledForcing::new(f, &grid, config.k_max);
    let omega = config.relaxation;
    let mut v = FourierField::zeros(&grid, config.k_max);
    let mut w = Vec::new();
    let mut phi = Vec::new();
    let mut discarded_r0 = Vec::new();
    let mut hist = Vec::new();
    let mut norms = Vec::new();
    let mut converged = false;
    let zero_field = FourierField::zeros(&grid, config.k_max);
    for it in 1..=config.max_iters {
        let source = if config.linear_only { &zero_field } else { &v };
        let rhs = assemble_rhs(source, &forcing, nu)?;
        let (new, wk, pk) = linear_step(op, &rhs, g, mu)?;
        let next = if omega == T::one() { new } else { new.axpby(omega, &v, T::one() - omega)? };
        let d = bnorm(&next.axpby(T::one(), &v, -T::one())?, tau.tau, nu)?;
        if !d.is_finite() {
            return Err(Error::Divergence(format!("non-finite iterate at step {it}")));
        }
        log::info!("picard step {it}: distance {:.3e}", to_f64(d));
        hist.push(d);
        norms.push(bnorm(&next, tau.tau, nu)?);
        v = next;
        w = wk;
        phi = pk;
        discarded_r0 = rhs.discarded_r0;
        if d <= config.tol_picard || config.linear_only {
            converged = true;
            break;
        }
        if diverging(&hist) {
            return Err(Error::Divergence(format!(
                "distance grew for three consecutive steps: {}",
                hist.iter().map(|x| format!("{:.3e}", to_f64(*x))).collect::<Vec<_>>().join(", ")
            )));
        }
    }
    if !converged {
        let msg = format!(
            "not converged after {} iterations (last distance {:.3e})",
            hist.len(),
            to_f64(*hist.last().unwrap_or(&T::zero()))
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let solution_b = bnorm(&v, tau.tau, nu)?;
    let data = data_v + data_e;
    let c_emp = if data > T::zero() { solution_b / data } else { T::zero() };
    let residual_report = Some(residual_asns(&v, nu, mu, f, Some(g), None, config.z_samples_or_default())?);
    Ok(SolutionBundle {
        v,
        vorticity: w,
        stream: phi,
        nu,
        mu,
        tau,
        norms: Norms { data_v, data_e, solution_b, c_emp },
        state: IterationState {
            iterations: hist.len(),
            contraction_estimate: contraction_estimate(&hist),
            diff_norm_history: hist,
            norm_history: norms,
            converged,
        },
        discarded_r0,
        residual_report,
        warnings,
    })
}
