use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{czero, int, to_f64, Real};

/// Graded nodes 1 = r₀ < r₁ < … < r_N = R_max.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid<T> {
    nodes: Vec<T>,
    gamma: T,
}

impl<T: Real> RadialGrid<T> {
    /// r_i = 1 + (i/N)^γ (R_max − 1), i = 0..=N.
    pub fn graded(r_max: T, n: usize, gamma: T) -> Result<Self> {
        if n < 8 {
            return Err(Error::Config(format!("n_radial must be at least 8, got {n}")));
        }
        if !(r_max > T::one()) || !r_max.is_finite() {
            return Err(Error::Config(format!("r_max must exceed 1, got {}", to_f64(r_max))));
        }
        if !(gamma >= T::one()) || !gamma.is_finite() {
            return Err(Error::Config(format!("grid_gamma must be ≥ 1, got {}", to_f64(gamma))));
        }
        let nn = int::<T>(n as i64);
        let span = r_max - T::one();
        let mut nodes: Vec<T> = (0..=n)
            .map(|i| T::one() + (int::<T>(i as i64) / nn).powf(gamma) * span)
            .collect();
        nodes[0] = T::one();
        nodes[n] = r_max;
        Self::from_nodes_with_gamma(nodes, gamma)
    }

    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        Self::from_nodes_with_gamma(nodes, T::one())
    }

    fn from_nodes_with_gamma(nodes: Vec<T>, gamma: T) -> Result<Self> {
        if nodes.len() < 5 {
            return Err(Error::Domain("a radial grid needs at least 5 nodes".into()));
        }
        if nodes[0] != T::one() {
            return Err(Error::Domain("the first grid node must be r = 1".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("grid nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, gamma })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Number of nodes (N + 1).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of cells N.
    pub fn cells(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn r_max(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Index of the last node ≤ r.
    pub fn locate(&self, r: T) -> usize {
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }

    /// First node index with r_i ≥ r_max/10 (the last decade).
    pub fn last_decade_start(&self) -> usize {
        let lo = self.r_max() / int(10);
        self.nodes.iter().position(|&r| r >= lo).unwrap_or(0)
    }
}

/// Complex samples of one radial function on a shared grid.
#[derive(Clone, Debug)]
pub struct RadialProfile<T> {
    pub grid: Arc<RadialGrid<T>>,
    pub values: Vec<Complex<T>>,
    pub d1: Option<Vec<Complex<T>>>,
    pub d2: Option<Vec<Complex<T>>>,
    /// Declared asymptotic decay exponent p (profile ~ r^{-p}), when known.
    pub decay_exponent: Option<T>,
}

impl<T: Real> RadialProfile<T> {
    pub fn zeros(grid: &Arc<RadialGrid<T>>) -> Self {
        let n = grid.len();
        Self {
            grid: grid.clone(),
            values: vec![czero(); n],
            d1: Some(vec![czero(); n]),
            d2: Some(vec![czero(); n]),
            decay_exponent: None,
        }
    }

    pub fn from_values(grid: &Arc<RadialGrid<T>>, values: Vec<Complex<T>>) -> Self {
        assert_eq!(values.len(), grid.len(), "profile length must match grid");
        Self { grid: grid.clone(), values, d1: None, d2: None, decay_exponent: None }
    }

    pub fn from_fn(grid: &Arc<RadialGrid<T>>, f: impl Fn(T) -> Complex<T>) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::from_values(grid, values)
    }

    pub fn with_derivatives(mut self, d1: Vec<Complex<T>>, d2: Vec<Complex<T>>) -> Self {
        assert_eq!(d1.len(), self.values.len());
        assert_eq!(d2.len(), self.values.len());
        self.d1 = Some(d1);
        self.d2 = Some(d2);
        self
    }

    pub fn with_decay(mut self, p: T) -> Self {
        self.decay_exponent = Some(p);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn d1(&self) -> Result<&[Complex<T>]> {
        self.d1.as_deref().ok_or_else(|| Error::MissingDerivative("first derivative".into()))
    }

    pub fn d2(&self) -> Result<&[Complex<T>]> {
        self.d2.as_deref().ok_or_else(|| Error::MissingDerivative("second derivative".into()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == T::zero() && v.im == T::zero())
    }

    /// Elementwise `a·self + b·other`, derivatives kept where both carry them.
    pub fn axpby(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Self {
        let comb = |x: &[Complex<T>], y: &[Complex<T>]| -> Vec<Complex<T>> {
            x.iter().zip(y).map(|(&u, &v)| a * u + b * v).collect()
        };
        let d = |x: &Option<Vec<Complex<T>>>, y: &Option<Vec<Complex<T>>>| match (x, y) {
            (Some(x), Some(y)) => Some(comb(x, y)),
            _ => None,
        };
        Self {
            grid: self.grid.clone(),
            values: comb(&self.values, &other.values),
            d1: d(&self.d1, &other.d1),
            d2: d(&self.d2, &other.d2),
            decay_exponent: self.decay_exponent,
        }
    }

    pub fn scaled(&self, a: Complex<T>) -> Self {
        let s = |x: &Vec<Complex<T>>| x.iter().map(|&u| a * u).collect::<Vec<_>>();
        Self {
            grid: self.grid.clone(),
            values: s(&self.values),
            d1: self.d1.as_ref().map(s),
            d2: self.d2.as_ref().map(s),
            decay_exponent: self.decay_exponent,
        }
    }

    pub fn conj(&self) -> Self {
        let s = |x: &Vec<Complex<T>>| x.iter().map(|u| u.conj()).collect::<Vec<_>>();
        Self {
            grid: self.grid.clone(),
            values: s(&self.values),
            d1: self.d1.as_ref().map(s),
            d2: self.d2.as_ref().map(s),
            decay_exponent: self.decay_exponent,
        }
    }

    /// Value at arbitrary r ∈ [1, R_max] by local cubic Lagrange interpolation.
    pub fn interpolate(&self, r: T) -> Result<Complex<T>> {
        interpolate_cubic(&self.grid, &self.values, r)
    }
}

pub(crate) fn interpolate_cubic<T: Real>(
    grid: &RadialGrid<T>,
    values: &[Complex<T>],
    r: T,
) -> Result<Complex<T>> {
    let nodes = grid.nodes();
    let tol = T::epsilon() * grid.r_max() * int(16);
    if !(r >= T::one() - tol && r <= grid.r_max() + tol) {
        return Err(Error::Domain(format!(
            "r = {} outside grid range [1, {}]",
            to_f64(r),
            to_f64(grid.r_max())
        )));
    }
    let i = grid.locate(r).min(grid.cells() - 1);
    if r == nodes[i] {
        return Ok(values[i]);
    }
    let start = i.saturating_sub(1).min(nodes.len() - 4);
    let mut out = czero();
    for j in start..start + 4 {
        let mut l = T::one();
        for m in start..start + 4 {
            if m != j {
                l *= (r - nodes[m]) / (nodes[j] - nodes[m]);
            }
        }
        out += values[j] * l;
    }
    Ok(out)
}
