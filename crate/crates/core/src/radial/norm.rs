use num_complex::Complex;

use super::grid::{RadialGrid, RadialProfile};
use crate::error::{Error, Result};
use crate::scalar::{int, Real};

/// sup over grid nodes of r^ζ|s(r)|, with the node where it is attained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedNorm<T> {
    pub zeta: T,
    pub value: T,
    pub argmax: usize,
}

pub fn weighted_sup<T: Real>(s: &RadialProfile<T>, zeta: T) -> WeightedNorm<T> {
    weighted_sup_values(&s.grid, &s.values, zeta)
}

pub fn weighted_sup_values<T: Real>(
    grid: &RadialGrid<T>,
    values: &[Complex<T>],
    zeta: T,
) -> WeightedNorm<T> {
    let mut best = WeightedNorm { zeta, value: T::zero(), argmax: 0 };
    for (i, (&r, v)) in grid.nodes().iter().zip(values).enumerate() {
        let w = r.powf(zeta) * v.norm();
        if w > best.value {
            best.value = w;
            best.argmax = i;
        }
    }
    best
}

/// Least-squares slope of log|v| against log r over nodes in [r_lo, r_hi],
/// with the coefficient of determination R².
pub fn loglog_fit<T: Real>(
    grid: &RadialGrid<T>,
    values: &[Complex<T>],
    r_lo: T,
    r_hi: T,
) -> Result<(T, T)> {
    let pts: Vec<(T, T)> = grid
        .nodes()
        .iter()
        .zip(values)
        .filter(|(&r, v)| r >= r_lo && r <= r_hi && v.norm() > T::zero())
        .map(|(&r, v)| (r.ln(), v.norm().ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::EmptyFitWindow(format!(
            "{} nonzero samples in the fit window",
            pts.len()
        )));
    }
    let n = int::<T>(pts.len() as i64);
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<T>();
    let sxx = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<T>();
    let syy = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum::<T>();
    let slope = sxy / sxx;
    let r2 = if syy > T::zero() { sxy * sxy / (sxx * syy) } else { T::one() };
    Ok((slope, r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;
    use std::sync::Arc;

    #[test]
    fn exact_power_weights() {
        let g = Arc::new(RadialGrid::graded(100.0f64, 256, 2.0).unwrap());
        let p = RadialProfile::from_fn(&g, |r| creal(r.powf(-1.5)));
        let w = weighted_sup(&p, 1.5);
        assert!((w.value - 1.0).abs() < 1e-13);
        let p = RadialProfile::from_fn(&g, |r| creal(r.powf(-2.5)));
        let w = weighted_sup(&p, 1.5);
        assert!((w.value - 1.0).abs() < 1e-15);
        assert_eq!(w.argmax, 0);
    }

    #[test]
    fn fit_of_pure_power() {
        let g = RadialGrid::graded(100.0f64, 256, 2.0).unwrap();
        let v: Vec<_> = g.nodes().iter().map(|&r| creal(r.powi(-2))).collect();
        let (s, r2) = loglog_fit(&g, &v, 10.0, 100.0).unwrap();
        assert!((s + 2.0).abs() < 1e-10);
        assert!((r2 - 1.0).abs() < 1e-12);
        let z = vec![creal(0.0); g.len()];
        assert!(loglog_fit(&g, &z, 10.0, 100.0).is_err());
    }
}
