//! Five-point finite-difference differentiation on a nonuniform grid.

use num_complex::Complex;

use super::grid::RadialGrid;
use crate::scalar::{czero, int, Real};

/// Weights c[d][j] of the d-th derivative at `x0` over nodes `x` (Fornberg).
pub fn fornberg_weights<T: Real>(x0: T, x: &[T], m: usize) -> Vec<Vec<T>> {
    let n = x.len();
    let mut c = vec![vec![T::zero(); n]; m + 1];
    let mut c1 = T::one();
    let mut c4 = x[0] - x0;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = int::<T>(k as i64);
                    c[k][i] = c1 * (kk * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = int::<T>(k as i64);
                c[k][j] = (c4 * c[k][j] - kk * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// First and second derivative stencils for every node of a grid
/// (centred interior, one-sided at the ends).
#[derive(Clone, Debug)]
pub struct DiffOperator<T> {
    start: Vec<usize>,
    w1: Vec<[T; 5]>,
    w2: Vec<[T; 5]>,
}

impl<T: Real> DiffOperator<T> {
    pub fn new(grid: &RadialGrid<T>) -> Self {
        let r = grid.nodes();
        let n = r.len();
        let mut start = Vec::with_capacity(n);
        let mut w1 = Vec::with_capacity(n);
        let mut w2 = Vec::with_capacity(n);
        for i in 0..n {
            let s = i.saturating_sub(2).min(n - 5);
            let c = fornberg_weights(r[i], &r[s..s + 5], 2);
            let mut a = [T::zero(); 5];
            let mut b = [T::zero(); 5];
            for j in 0..5 {
                a[j] = c[1][j];
                b[j] = c[2][j];
            }
            start.push(s);
            w1.push(a);
            w2.push(b);
        }
        Self { start, w1, w2 }
    }

    fn apply(&self, w: &[[T; 5]], v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.start
            .iter()
            .zip(w)
            .map(|(&s, w)| {
                let mut acc = czero::<T>();
                for j in 0..5 {
                    acc += v[s + j] * w[j];
                }
                acc
            })
            .collect()
    }

    pub fn first(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.apply(&self.w1, v)
    }

    pub fn second(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.apply(&self.w2, v)
    }

    pub fn first_real(&self, v: &[T]) -> Vec<T> {
        self.start
            .iter()
            .zip(&self.w1)
            .map(|(&s, w)| (0..5).map(|j| v[s + j] * w[j]).sum())
            .collect()
    }

    pub fn second_real(&self, v: &[T]) -> Vec<T> {
        self.start
            .iter()
            .zip(&self.w2)
            .map(|(&s, w)| (0..5).map(|j| v[s + j] * w[j]).sum())
            .collect()
    }
}
