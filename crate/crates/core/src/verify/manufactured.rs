//! Manufactured solutions: an exact reduced field v*, the forcing that makes
//! background + v* a steady solution, and a solve-and-compare harness.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::fourier::{BoundaryData, Component, ForcingData, RadialFunction};
use crate::nonlinear::{picard_solve, SolutionBundle, SolverConfig};

/// c·r^{−n}·e^{−rate(r−1)}
#[derive(Clone, Copy, Debug, PartialEq)]
struct Term {
    c: Complex64,
    n: i32,
    rate: f64,
}

/// Finite sums of terms, closed under d/dr, products and division by r.
#[derive(Clone, Debug, Default, PartialEq)]
struct Expr(Vec<Term>);

impl Expr {
    fn term(c: Complex64, n: i32, rate: f64) -> Self {
        Expr(vec![Term { c, n, rate }])
    }

    fn push(&mut self, t: Term) {
        if t.c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.0.iter_mut().find(|s| s.n == t.n && s.rate == t.rate) {
            Some(s) => s.c += t.c,
            None => self.0.push(t),
        }
    }

    fn add(&mut self, o: &Expr, a: Complex64) {
        for t in &o.0 {
            self.push(Term { c: t.c * a, ..*t });
        }
    }

    fn d(&self) -> Expr {
        let mut out = Expr::default();
        for t in &self.0 {
            out.push(Term { c: -t.c * t.rate, ..*t });
            out.push(Term { c: -t.c * t.n as f64, n: t.n + 1, rate: t.rate });
        }
        out
    }

    fn over_r(&self, p: i32) -> Expr {
        Expr(self.0.iter().map(|t| Term { n: t.n + p, ..*t }).collect())
    }

    fn mul(&self, o: &Expr) -> Expr {
        let mut out = Expr::default();
        for a in &self.0 {
            for b in &o.0 {
                out.push(Term { c: a.c * b.c, n: a.n + b.n, rate: a.rate + b.rate });
            }
        }
        out
    }

    fn eval(&self, r: f64) -> Complex64 {
        self.0.iter().map(|t| t.c * (r.powi(-t.n) * (-t.rate * (r - 1.0)).exp())).sum()
    }

    /// Slowest algebraic exponent, or None when every term is exponential.
    fn decay(&self) -> Option<f64> {
        self.0.iter().filter(|t| t.rate == 0.0 && t.c.norm() > 0.0).map(|t| t.n as f64).reduce(f64::min)
    }
}

/// v* with zero mode v_θ = a r^{−3}, v_z = b r^{−3} and first mode
/// v_θ = c e^{−(r−1)}/r, stream function φ = d e^{−(r−1)}/r
/// (so v_r = −i d e^{−(r−1)}/r, v_z = −d e^{−(r−1)}/r).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedCase {
    pub nu: f64,
    pub mu: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ManufacturedCase {
    pub fn new(nu: f64, mu: f64, eps: f64) -> Self {
        Self { nu, mu, a: eps, b: -0.5 * eps, c: eps, d: 0.7 * eps }
    }

    /// Mode k ∈ {−1, 0, 1} of v*, components (r, θ, z).
    fn mode(&self, k: i64) -> [Expr; 3] {
        let cx = |x: f64| Complex64::new(x, 0.0);
        match k {
            0 => [Expr::default(), Expr::term(cx(self.a), 3, 0.0), Expr::term(cx(self.b), 3, 0.0)],
            1 | -1 => {
                let s = k as f64;
                [
                    Expr::term(Complex64::new(0.0, -s * self.d), 1, 1.0),
                    Expr::term(cx(self.c), 1, 1.0),
                    Expr::term(cx(-self.d), 1, 1.0),
                ]
            }
            _ => [Expr::default(), Expr::default(), Expr::default()],
        }
    }

    /// v*_{c,k}(r); zero outside |k| ≤ 1.
    pub fn exact(&self, c: Component, k: i64, r: f64) -> Complex64 {
        self.mode(k)[slot(c)].eval(r)
    }

    /// Mode k of f = (u·∇)u − Δu with u = background + v* and no pressure.
    /// f_{r,0} carries the background's pressure gradient; it is absorbed.
    fn forcing_mode(&self, k: i64) -> [Expr; 3] {
        let full = |l: i64| {
            let mut m = self.mode(l);
            if l == 0 {
                m[0].add(&Expr::term(Complex64::new(self.nu, 0.0), 1, 0.0), Complex64::new(1.0, 0.0));
                m[1].add(&Expr::term(Complex64::new(self.mu, 0.0), 1, 0.0), Complex64::new(1.0, 0.0));
            }
            m
        };
        let one = Complex64::new(1.0, 0.0);
        let mut out = [Expr::default(), Expr::default(), Expr::default()];
        for l in -1..=1 {
            let u = full(l);
            let q = full(k - l);
            let ikl = Complex64::new(0.0, (k - l) as f64);
            for c in 0..3 {
                out[c].add(&u[0].mul(&q[c].d()), one);
                out[c].add(&u[2].mul(&q[c]), ikl);
            }
            out[0].add(&u[1].mul(&q[1]).over_r(1), -one);
            out[1].add(&u[0].mul(&q[1]).over_r(1), one);
        }
        let u = full(k);
        let k2 = Complex64::new((k * k) as f64, 0.0);
        for c in 0..3 {
            let lap = {
                let mut e = u[c].d().d();
                e.add(&u[c].d().over_r(1), one);
                e.add(&u[c], -k2);
                if c < 2 {
                    e.add(&u[c].over_r(2), -one);
                }
                e
            };
            out[c].add(&lap, -one);
        }
        out
    }

    pub fn forcing(&self) -> ForcingData<f64> {
        let mut f = ForcingData::zero();
        for k in -2..=2i64 {
            let m = self.forcing_mode(k);
            for c in Component::ALL {
                let e = Arc::new(m[slot(c)].clone());
                if e.0.is_empty() {
                    continue;
                }
                let decay = e.decay();
                f.set(c, k, RadialFunction::custom(move |r| e.eval(r), decay));
            }
        }
        f
    }

    pub fn boundary(&self) -> BoundaryData<f64> {
        let mut g = BoundaryData::zero();
        for k in 0..=1i64 {
            for c in Component::ALL {
                let v = self.exact(c, k, 1.0);
                if v.norm() > 0.0 {
                    g.set_real_mode(c, k, v);
                }
            }
        }
        g
    }
}

fn slot(c: Component) -> usize {
    match c {
        Component::R => 0,
        Component::Theta => 1,
        Component::Z => 2,
    }
}

/// Field error of a manufactured solve: max over modes, components and
/// r ≤ R_max/2 (`inner`) or all nodes (`all`). The zero-mode swirl includes σ/r.
#[derive(Clone, Debug)]
pub struct ManufacturedResult {
    pub inner: f64,
    pub all: f64,
    pub bundle: SolutionBundle<f64>,
}

pub fn manufactured_run(case: &ManufacturedCase, config: &SolverConfig<f64>) -> Result<ManufacturedResult> {
    let f = case.forcing();
    let g = case.boundary();
    let bundle = picard_solve(config, &f, &g)?;
    let v = &bundle.v;
    let grid = v.grid().clone();
    let half = grid.r_max() / 2.0;
    let sigma = v.sigma.unwrap_or(0.0);
    let (mut inner, mut all) = (0.0f64, 0.0f64);
    for (k, m) in v.iter() {
        for c in Component::ALL {
            for (i, &r) in grid.nodes().iter().enumerate() {
                let mut got = m.get(c).values[i];
                if k == 0 && c == Component::Theta {
                    got += sigma / r;
                }
                let e = (got - case.exact(c, k, r)).norm();
                all = all.max(e);
                if r <= half {
                    inner = inner.max(e);
                }
            }
        }
    }
    Ok(ManufacturedResult { inner, all, bundle })
}
