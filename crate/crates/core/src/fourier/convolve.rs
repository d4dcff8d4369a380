use num_complex::Complex;
use rayon::prelude::*;

use super::field::{Component, FourierField};
use crate::error::{Error, Result};
use crate::scalar::{czero, ik, Real};

/// Which radial derivative of a profile to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Deriv {
    Value,
    D1,
    D2,
}

/// Grid samples of one scalar quantity for modes k = −K..K.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSeries<T> {
    k_max: usize,
    n: usize,
    data: Vec<Vec<Complex<T>>>,
}

impl<T: Real> ModeSeries<T> {
    pub fn zeros(k_max: usize, n: usize) -> Self {
        Self { k_max, n, data: vec![vec![czero(); n]; 2 * k_max + 1] }
    }

    pub fn from_fn(k_max: usize, n: usize, f: impl Fn(i64, usize) -> Complex<T>) -> Self {
        let kk = k_max as i64;
        let data = (-kk..=kk).map(|k| (0..n).map(|i| f(k, i)).collect()).collect();
        Self { k_max, n, data }
    }

    pub fn from_field(v: &FourierField<T>, c: Component, d: Deriv) -> Result<Self> {
        let n = v.grid().len();
        let mut data = Vec::with_capacity(2 * v.k_max() + 1);
        for (_, m) in v.iter() {
            let p = m.get(c);
            data.push(match d {
                Deriv::Value => p.values.clone(),
                Deriv::D1 => p.d1()?.to_vec(),
                Deriv::D2 => p.d2()?.to_vec(),
            });
        }
        Ok(Self { k_max: v.k_max(), n, data })
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: i64) -> &[Complex<T>] {
        &self.data[(k + self.k_max as i64) as usize]
    }

    pub fn get_mut(&mut self, k: i64) -> &mut [Complex<T>] {
        let s = (k + self.k_max as i64) as usize;
        &mut self.data[s]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(|v| v.norm() == T::zero())
    }

    /// Mode k multiplied by ik (the z-derivative).
    pub fn dz(&self) -> Self {
        let kk = self.k_max as i64;
        let data = self
            .data
            .iter()
            .zip(-kk..=kk)
            .map(|(row, k)| row.iter().map(|&v| v * ik::<T>(k)).collect())
            .collect();
        Self { k_max: self.k_max, n: self.n, data }
    }

    /// Every sample multiplied by w[i] (a radial weight such as 1/r).
    pub fn weighted(&self, w: &[T]) -> Self {
        let data = self
            .data
            .iter()
            .map(|row| row.iter().zip(w).map(|(&v, &x)| v * x).collect())
            .collect();
        Self { k_max: self.k_max, n: self.n, data }
    }

    pub fn axpby(&self, a: T, o: &Self, b: T) -> Result<Self> {
        self.check(o)?;
        let data = self
            .data
            .iter()
            .zip(&o.data)
            .map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| u * a + v * b).collect())
            .collect();
        Ok(Self { k_max: self.k_max, n: self.n, data })
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.k_max != o.k_max || self.n != o.n {
            return Err(Error::GridMismatch(format!(
                "mode series shapes differ: K={} n={} vs K={} n={}",
                self.k_max, self.n, o.k_max, o.n
            )));
        }
        Ok(())
    }
}

fn conv_mode<T: Real>(a: &ModeSeries<T>, b: &ModeSeries<T>, k: i64) -> Vec<Complex<T>> {
    let kk = a.k_max as i64;
    let mut out = vec![czero::<T>(); a.n];
    for l in (k - kk).max(-kk)..=(k + kk).min(kk) {
        let (x, y) = (a.get(k - l), b.get(l));
        for ((o, &u), &v) in out.iter_mut().zip(x).zip(y) {
            *o += u * v;
        }
    }
    out
}

/// (a∗b)_k = Σ_{|ℓ|≤K, |k−ℓ|≤K} a_{k−ℓ} b_ℓ pointwise in r, truncated at |k| ≤ K.
/// Output modes are computed in parallel; each is summed in a fixed order.
pub fn convolve_product<T: Real>(a: &ModeSeries<T>, b: &ModeSeries<T>) -> Result<ModeSeries<T>> {
    a.check(b)?;
    let kk = a.k_max as i64;
    let data = (-kk..=kk).into_par_iter().map(|k| conv_mode(a, b, k)).collect();
    Ok(ModeSeries { k_max: a.k_max, n: a.n, data })
}

/// Largest magnitude among the product modes K < |k| ≤ 2K dropped by truncation.
pub fn convolution_tail<T: Real>(a: &ModeSeries<T>, b: &ModeSeries<T>) -> Result<T> {
    a.check(b)?;
    let kk = a.k_max as i64;
    let ks: Vec<i64> = (kk + 1..=2 * kk).flat_map(|k| [k, -k]).collect();
    Ok(ks
        .par_iter()
        .map(|&k| conv_mode(a, b, k).iter().map(|v| v.norm()).fold(T::zero(), T::max))
        .reduce(T::zero, T::max))
}
