//! Two solutions with the same data for ν < −2: the rotation strength μ of
//! the background is traded against a 1/r part of the reduced swirl.

use super::picard::{picard_with, SolutionBundle, SolverConfig};
use crate::error::{Error, Result};
use crate::fourier::{bnorm, BoundaryData, Component, ForcingData};
use crate::linear::ModeOperator;
use crate::radial::RadialGrid;
use crate::scalar::{creal, to_f64, Real};

/// r·(u_θ − ũ_θ) of the z-averaged swirl.
#[derive(Clone, Debug)]
pub struct SeparationReport<T> {
    pub delta_mu: T,
    /// (r, r·(u_θ − ũ_θ)) over the last decade of the grid.
    pub samples: Vec<(T, T)>,
    /// Value at the node nearest R_max/2.
    pub at_half: (T, T),
    /// L from a least-squares fit of L + c/r over the last decade.
    pub limit_estimate: T,
    /// Solution-norm distance between the two reduced solutions.
    pub reduced_distance: T,
}

/// Fits y ≈ L + c/r and returns L.
fn fit_limit<T: Real>(pts: &[(T, T)]) -> T {
    let n = T::from_usize(pts.len()).expect("count fits scalar");
    let xs: Vec<T> = pts.iter().map(|p| T::one() / p.0).collect();
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxx = xs.iter().map(|&x| (x - mx) * (x - mx)).sum::<T>();
    if sxx == T::zero() {
        return my;
    }
    let sxy = xs.iter().zip(pts).map(|(&x, p)| (x - mx) * (p.1 - my)).sum::<T>();
    my - sxy / sxx * mx
}

/// Solves once with μ and once with μ̃ = μ + δμ and the swirl boundary value
/// g_θ − δμ, so that both full velocities carry the same boundary data.
pub fn nonuniqueness_pair<T: Real>(
    config: &SolverConfig<T>,
    f: &ForcingData<T>,
    g: &BoundaryData<T>,
    delta_mu: T,
) -> Result<(SolutionBundle<T>, SolutionBundle<T>, SeparationReport<T>)> {
    if !(config.nu < -T::one() - T::one()) {
        return Err(Error::Refused(format!(
            "the two-solution construction needs ν < −2 (got ν = {}); for ν ≥ −2 the \
             zero-mode swirl admits a 1/r part, so μ cannot be traded against it",
            to_f64(config.nu)
        )));
    }
    config.validate()?;
    g.validate()?;
    f.validate(&config.decay)?;
    let tau = config.tau()?;
    let grid = config.grid()?;
    let op = ModeOperator::new(&grid, config.nu, config.k_max)?;
    let a = picard_with(config, &op, tau, f, g)?;
    let mut g2 = g.clone();
    g2.set(Component::Theta, 0, g.get(Component::Theta, 0) - creal(delta_mu));
    let cfg2 = SolverConfig { mu: config.mu + delta_mu, ..config.clone() };
    let b = picard_with(&cfg2, &op, tau, f, &g2)?;
    let report = separation(&grid, &a, &b, delta_mu)?;
    Ok((a, b, report))
}

fn separation<T: Real>(
    grid: &RadialGrid<T>,
    a: &SolutionBundle<T>,
    b: &SolutionBundle<T>,
    delta_mu: T,
) -> Result<SeparationReport<T>> {
    let r = grid.nodes();
    let (ta, tb) = (&a.v.mode(0).theta.values, &b.v.mode(0).theta.values);
    let sep = |i: usize| r[i] * ((a.mu - b.mu) / r[i] + ta[i].re - tb[i].re);
    let samples: Vec<(T, T)> = (grid.last_decade_start()..r.len()).map(|i| (r[i], sep(i))).collect();
    let half = grid.r_max() / (T::one() + T::one());
    let ih = grid.locate(half).min(r.len() - 2);
    let ih = if (r[ih + 1] - half).abs() < (r[ih] - half).abs() { ih + 1 } else { ih };
    let reduced_distance = bnorm(&a.v.axpby(T::one(), &b.v, -T::one())?, a.tau.tau, a.nu)?;
    Ok(SeparationReport {
        delta_mu,
        limit_estimate: fit_limit(&samples),
        samples,
        at_half: (r[ih], sep(ih)),
        reduced_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(nu: f64) -> SolverConfig<f64> {
        SolverConfig { k_max: 2, n_radial: 512, ..SolverConfig::new(nu, 1.0) }
    }

    #[test]
    fn refused_outside_steep_sink() {
        let e = nonuniqueness_pair(&cfg(-1.0), &ForcingData::zero(), &BoundaryData::zero(), 0.05);
        assert!(matches!(e, Err(Error::Refused(_))));
        let e = nonuniqueness_pair(&cfg(-2.0), &ForcingData::zero(), &BoundaryData::zero(), 0.05);
        assert!(matches!(e, Err(Error::Refused(_))));
    }

    #[test]
    fn zero_shift_gives_identical_solutions() {
        let (a, b, s) =
            nonuniqueness_pair(&cfg(-3.0), &ForcingData::zero(), &BoundaryData::zero(), 0.0).unwrap();
        assert!(a.v.is_zero() && b.v.is_zero());
        assert!(s.samples.iter().all(|p| p.1 == 0.0));
        assert_eq!(s.reduced_distance, 0.0);
    }

    #[test]
    fn separation_tends_to_minus_delta() {
        let (_, _, s) =
            nonuniqueness_pair(&cfg(-3.0), &ForcingData::zero(), &BoundaryData::zero(), 0.05).unwrap();
        // reduced swirl −0.05 r^{−2}: r·(u_θ − ũ_θ) = −0.05 + 0.05/r
        for &(r, y) in &s.samples {
            assert!((y - (-0.05 + 0.05 / r)).abs() < 1e-9, "r={r} y={y}");
        }
        assert!((s.limit_estimate + 0.05).abs() < 1e-8);
        assert!((s.at_half.1 + 0.05).abs() < 0.05 * 0.05);
        assert!(s.reduced_distance > 10.0 * 1e-12);
    }

    #[test]
    fn limit_fit_exact_on_model() {
        let pts: Vec<(f64, f64)> = (1..20).map(|i| (i as f64 * 5.0, 2.0 - 3.0 / (i as f64 * 5.0))).collect();
        assert!((fit_limit(&pts) - 2.0).abs() < 1e-12);
    }
}
