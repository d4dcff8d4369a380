//! Empirical smallness threshold: the largest data scale s for which the
//! iteration on (s·f, s·g) still converges, found by bisection in log s.

use std::collections::BTreeMap;

use super::picard::{picard_with, SolverConfig};
use crate::error::{Error, Result};
use crate::fourier::{BoundaryData, ForcingData};
use crate::linear::ModeOperator;
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration<T> {
    /// Largest scale observed to converge.
    pub converged_scale: T,
    /// Smallest scale observed to fail (diverge or exhaust max_iters).
    pub failed_scale: Option<T>,
    /// ‖s·f‖ + ‖s·g‖ at `converged_scale`.
    pub threshold: T,
    /// (scale, converged, contraction estimate) per probe.
    pub probes: Vec<(T, bool, T)>,
}

/// Bisection over scale ∈ [lo, hi] with `steps` probes after the bracket check.
pub fn calibrate_threshold<T: Real>(
    config: &SolverConfig<T>,
    f: &ForcingData<T>,
    g: &BoundaryData<T>,
    lo: T,
    hi: T,
    steps: usize,
) -> Result<Calibration<T>> {
    config.validate()?;
    g.validate()?;
    let tau = config.tau()?;
    let grid = config.grid()?;
    let op = ModeOperator::new(&grid, config.nu, config.k_max)?;
    let base = g.vnorm() + f.enorm(&grid, &config.decay);
    if base == T::zero() {
        return Err(Error::Config("calibration needs nonzero data".into()));
    }
    let mut probes = Vec::new();
    let mut probe = |s: T| -> Result<bool> {
        let ok = match picard_with(config, &op, tau, &f.scaled(s), &g.scaled(s)) {
            Ok(b) => {
                probes.push((s, b.state.converged, b.state.contraction_estimate));
                b.state.converged
            }
            Err(Error::Divergence(_)) => {
                probes.push((s, false, T::infinity()));
                false
            }
            Err(e) => return Err(e),
        };
        log::info!("calibration probe scale {:.4e}: {}", to_f64(s), if ok { "converged" } else { "failed" });
        Ok(ok)
    };
    if !probe(lo)? {
        return Err(Error::Config(format!("iteration fails already at scale {}", to_f64(lo))));
    }
    if probe(hi)? {
        return Ok(Calibration { converged_scale: hi, failed_scale: None, threshold: hi * base, probes });
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..steps {
        let mid = (a.ln() * lit(0.5) + b.ln() * lit(0.5)).exp();
        if probe(mid)? {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Calibration { converged_scale: a, failed_scale: Some(b), threshold: a * base, probes })
}

/// Thresholds per (ν, μ), keyed by their bit patterns.
#[derive(Clone, Debug, Default)]
pub struct CalibrationCache {
    entries: BTreeMap<(u64, u64), f64>,
}

impl CalibrationCache {
    pub fn get(&self, nu: f64, mu: f64) -> Option<f64> {
        self.entries.get(&(nu.to_bits(), mu.to_bits())).copied()
    }

    pub fn insert(&mut self, nu: f64, mu: f64, threshold: f64) {
        self.entries.insert((nu.to_bits(), mu.to_bits()), threshold);
    }

    /// One `nu mu threshold` line per entry.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(&(a, b), t)| format!("{:e} {:e} {:e}\n", f64::from_bits(a), f64::from_bits(b), t))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            if v.len() != 3 {
                return Err(Error::Parse { line: i + 1, msg: "expected `nu mu threshold`".into() });
            }
            c.insert(v[0], v[1], v[2]);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::Component;
    use crate::scalar::creal;

    #[test]
    fn bisection_brackets_failure() {
        let cfg = SolverConfig { k_max: 3, n_radial: 256, max_iters: 30, ..SolverConfig::new(-1.0, 5.0) };
        let mut g = BoundaryData::zero();
        g.set_real_mode(Component::Theta, 1, creal(1.0));
        g.set_real_mode(Component::R, 1, creal(1.0));
        let c = calibrate_threshold(&cfg, &ForcingData::zero(), &g, 1e-3, 1e2, 6).unwrap();
        let fail = c.failed_scale.expect("scale 100 should not converge");
        assert!(c.converged_scale < fail);
        assert!(fail / c.converged_scale < 10f64.powf(5.0 / 64.0) + 1e-9);
        assert!(c.probes.iter().any(|p| !p.1));
    }

    #[test]
    fn cache_round_trip() {
        let mut c = CalibrationCache::default();
        c.insert(-1.0, 5.0, 0.123);
        c.insert(-3.0, 1.0, 2.5e-2);
        let back = CalibrationCache::parse(&c.render()).unwrap();
        assert_eq!(back.get(-1.0, 5.0), Some(0.123));
        assert_eq!(back.get(-3.0, 1.0), Some(2.5e-2));
        assert!(CalibrationCache::parse("1 2").is_err());
    }
}
