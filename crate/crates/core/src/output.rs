//! Deterministic on-disk layout: per-mode CSVs, residual curves, the
//! separation table and the plain-text summary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{FourierField, ModeComponents};
use crate::nonlinear::{SeparationReport, SolutionBundle};
use crate::radial::{RadialGrid, RadialProfile};
use crate::verify::ResidualReport;

pub const MODE_HEADER: &str =
    "r,v_r_re,v_r_im,v_theta_re,v_theta_im,v_z_re,v_z_im,w_re,w_im,phi_re,phi_im";

/// 17 significant digits, enough to round-trip every f64.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn mode_file(dir: &Path, k: usize) -> PathBuf {
    dir.join(format!("mode_{k}.csv"))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// mode_k.csv for k = 0..K; the zero-mode swirl column includes σ/r.
pub fn write_modes(dir: &Path, b: &SolutionBundle<f64>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let r = b.v.grid().nodes();
    let sigma = b.v.sigma.unwrap_or(0.0);
    let mut files = Vec::new();
    for k in 0..=b.v.k_max() {
        let m = b.v.mode(k as i64);
        let zero = RadialProfile::zeros(b.v.grid());
        let w = b.vorticity.get(k).unwrap_or(&zero);
        let phi = b.stream.get(k).unwrap_or(&zero);
        let mut s = String::with_capacity(r.len() * 260);
        s.push_str(MODE_HEADER);
        s.push('\n');
        for (i, &ri) in r.iter().enumerate() {
            let mut th = m.theta.values[i];
            if k == 0 {
                th += sigma / ri;
            }
            let cols = [m.r.values[i], th, m.z.values[i], w.values[i], phi.values[i]];
            s.push_str(&fmt_num(ri));
            for c in cols {
                s.push(',');
                s.push_str(&fmt_num(c.re));
                s.push(',');
                s.push_str(&fmt_num(c.im));
            }
            s.push('\n');
        }
        let path = mode_file(dir, k);
        write_file(&path, &s)?;
        files.push(path);
    }
    Ok(files)
}

/// Radial nodes and the five complex columns of one mode file.
pub struct ModeTable {
    pub r: Vec<f64>,
    pub cols: [Vec<Complex64>; 5],
}

pub fn read_mode(path: &Path) -> Result<ModeTable> {
    let text = read_file(path)?;
    let fmt_err = |line: usize, msg: String| Error::Format {
        path: path.display().to_string(),
        msg: format!("line {line}: {msg}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == MODE_HEADER => {}
        _ => return Err(fmt_err(1, "missing or unexpected header".into())),
    }
    let mut r = Vec::new();
    let mut cols: [Vec<Complex64>; 5] = Default::default();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| fmt_err(i + 1, e.to_string()))?;
        if v.len() != 11 {
            return Err(fmt_err(i + 1, format!("expected 11 columns, found {}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(fmt_err(i + 1, "non-finite value".into()));
        }
        r.push(v[0]);
        for (c, col) in cols.iter_mut().enumerate() {
            col.push(Complex64::new(v[1 + 2 * c], v[2 + 2 * c]));
        }
    }
    Ok(ModeTable { r, cols })
}

/// Rebuilds the reduced field (σ folded into the zero-mode swirl) from
/// mode_0..mode_K. All files must share the same nodes.
pub fn read_field(dir: &Path, k_max: usize) -> Result<FourierField<f64>> {
    let tables: Vec<ModeTable> = (0..=k_max).map(|k| read_mode(&mode_file(dir, k))).collect::<Result<_>>()?;
    let nodes = tables[0].r.clone();
    for (k, t) in tables.iter().enumerate() {
        if t.r != nodes {
            return Err(Error::Format {
                path: mode_file(dir, k).display().to_string(),
                msg: "radial nodes differ from mode_0.csv".into(),
            });
        }
    }
    let grid = Arc::new(RadialGrid::from_nodes(nodes)?);
    let mut v = FourierField::zeros(&grid, k_max);
    for (k, t) in tables.into_iter().enumerate() {
        let [vr, vt, vz, _, _] = t.cols;
        let m = ModeComponents {
            r: RadialProfile::from_values(&grid, vr),
            theta: RadialProfile::from_values(&grid, vt),
            z: RadialProfile::from_values(&grid, vz),
        };
        v.set_real_mode(k as i64, m)?;
    }
    Ok(v)
}

pub fn residual_csv(rep: &ResidualReport<f64>) -> String {
    let mut s = String::from("r,res_r,res_theta,res_z,divergence\n");
    for c in &rep.curves {
        let row: Vec<String> = c.iter().map(|&x| fmt_num(x)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn separation_csv(rep: &SeparationReport<f64>) -> String {
    let mut s = String::from("r,r_times_swirl_difference\n");
    for &(r, y) in &rep.samples {
        let _ = writeln!(s, "{},{}", fmt_num(r), fmt_num(y));
    }
    s
}

/// `key = value` lines of a residual report.
pub fn residual_text(rep: &ResidualReport<f64>) -> String {
    let mut s = String::new();
    let m = rep.momentum;
    let o = rep.momentum_outer;
    let _ = writeln!(s, "residual_pressure = {}", if rep.with_pressure { "given" } else { "eliminated" });
    let _ = writeln!(s, "residual_momentum_inner = {:.6e} {:.6e} {:.6e}", m[0], m[1], m[2]);
    let _ = writeln!(s, "residual_momentum_outer = {:.6e} {:.6e} {:.6e}", o[0], o[1], o[2]);
    let _ = writeln!(s, "residual_divergence_inner = {:.6e}", rep.divergence);
    let _ = writeln!(s, "residual_divergence_outer = {:.6e}", rep.divergence_outer);
    let _ = writeln!(s, "boundary_mismatch = {:.6e}", rep.boundary_mismatch);
    let _ = writeln!(s, "residual_grid = n_radial {} k_max {} z_samples {}", rep.n_radial, rep.k_max, rep.z_samples);
    for (name, fit) in &rep.decay_fits {
        let _ = writeln!(s, "decay_fit.{name} = {:.6} (r2 {:.6})", fit.exponent, fit.r_squared);
    }
    s
}
