//! Orchestration of the command-line subcommands. Every function writes its
//! artifacts into a directory and returns the computed report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::config::{render_config, RunConfig};
use crate::error::{Error, Result};
use crate::linear::{solve_swirl_mode, solve_zero_meridional, solve_zero_swirl, Source};
use crate::nonlinear::{
    calibrate_threshold, nonuniqueness_pair, picard_solve, Calibration, CalibrationCache, SeparationReport,
    SolutionBundle,
};
use crate::output::{
    fmt_num, read_field, read_file, residual_csv, residual_text, separation_csv, write_file, write_modes,
};
use crate::radial::RadialGrid;
use crate::scalar::creal;
use crate::special::{bessel_i, bessel_i_prime, bessel_k, bessel_k_prime, kernel_k, BesselOrder, KernelFamily};
use crate::verify::{residual_asns, ResidualReport};

pub const CONFIG_COPY: &str = "config.ini";

fn prepare(dir: &Path, cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(&dir.join(CONFIG_COPY), &render_config(cfg))
}

fn bundle_summary(s: &mut String, b: &SolutionBundle<f64>) {
    let st = &b.state;
    let _ = writeln!(s, "tau = {:.6e}", b.tau.tau);
    let _ = writeln!(s, "lambda_bar_theta = {:.6e}", b.tau.lambda_bar_theta);
    let _ = writeln!(s, "lambda_bar_z = {:.6e}", b.tau.lambda_bar_z);
    let _ = writeln!(s, "converged = {}", st.converged);
    let _ = writeln!(s, "iterations = {}", st.iterations);
    let hist: Vec<String> = st.diff_norm_history.iter().map(|x| format!("{x:.6e}")).collect();
    let _ = writeln!(s, "diff_norms = {}", hist.join(" "));
    let _ = writeln!(s, "contraction_estimate = {:.6e}", st.contraction_estimate);
    let _ = writeln!(s, "data_norm_boundary = {:.6e}", b.norms.data_v);
    let _ = writeln!(s, "data_norm_forcing = {:.6e}", b.norms.data_e);
    let _ = writeln!(s, "solution_norm = {:.6e}", b.norms.solution_b);
    let _ = writeln!(s, "norm_ratio = {:.6e}", b.norms.c_emp);
    let _ = writeln!(s, "zero_solution = {}", b.v.is_zero());
    match b.v.sigma {
        Some(x) => {
            let _ = writeln!(s, "sigma = {}", fmt_num(x));
        }
        None => {
            let _ = writeln!(s, "sigma = none");
        }
    }
    if let Some(r) = &b.residual_report {
        s.push_str(&residual_text(r));
    }
    for w in &b.warnings {
        let _ = writeln!(s, "warning = {w}");
    }
}

/// `solve`: Picard iteration, mode CSVs, residual curves and summary.
pub fn run_solve(cfg: &RunConfig, dir: &Path) -> Result<SolutionBundle<f64>> {
    cfg.validate()?;
    prepare(dir, cfg)?;
    let b = picard_solve(&cfg.solver, &cfg.forcing_data(), &cfg.boundary_data())?;
    let files = write_modes(dir, &b)?;
    if let Some(r) = &b.residual_report {
        write_file(&dir.join("residuals.csv"), &residual_csv(r))?;
    }
    let mut s = String::from("# solve\n");
    bundle_summary(&mut s, &b);
    for f in &files {
        let _ = writeln!(s, "mode_file = {}", f.file_name().unwrap_or_default().to_string_lossy());
    }
    let _ = write!(s, "\n# config\n{}", render_config(cfg));
    write_file(&dir.join("summary.txt"), &s)?;
    if !b.state.converged {
        return Err(Error::NotConverged {
            iterations: b.state.iterations,
            last: b.state.diff_norm_history.last().copied().unwrap_or(f64::NAN),
        });
    }
    Ok(b)
}

/// Result of `verify`.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub report: ResidualReport<f64>,
    /// Inner momentum and divergence residuals within `residual_tol`.
    pub passed: bool,
}

/// `verify`: recomputes the residuals of the solution stored in `dir`.
pub fn run_verify(cfg: &RunConfig, dir: &Path) -> Result<VerifyOutcome> {
    let v = read_field(dir, cfg.solver.k_max)?;
    let s = &cfg.solver;
    let rep = residual_asns(
        &v,
        s.nu,
        s.mu,
        &cfg.forcing_data(),
        Some(&cfg.boundary_data()),
        None,
        s.z_samples_or_default(),
    )?;
    write_file(&dir.join("residuals.csv"), &residual_csv(&rep))?;
    let worst = rep.max_momentum().max(rep.divergence);
    let passed = worst <= cfg.residual_tol;
    let mut t = String::from("# verify\n");
    t.push_str(&residual_text(&rep));
    let _ = writeln!(t, "residual_tol = {:.6e}", cfg.residual_tol);
    let _ = writeln!(t, "passed = {passed}");
    if !passed {
        let (i, c) = rep
            .curves
            .iter()
            .enumerate()
            .filter(|(_, c)| c[0] <= cfg.solver.r_max / 2.0)
            .max_by(|a, b| a.1[1..].iter().fold(0.0f64, |m, &x| m.max(x)).total_cmp(&b.1[1..].iter().fold(0.0f64, |m, &x| m.max(x))))
            .expect("grid has nodes");
        let _ = writeln!(t, "worst_node = {i} (r = {:.6e})", c[0]);
    }
    write_file(&dir.join("verify.txt"), &t)?;
    Ok(VerifyOutcome { report: rep, passed })
}

/// `nonunique`: the two solutions with μ and μ + δμ and their separation.
pub fn run_nonunique(cfg: &RunConfig, dir: &Path) -> Result<SeparationReport<f64>> {
    if !(cfg.solver.nu < -2.0) {
        // refuse before any other check so the reason is the first thing reported
        return Err(Error::Refused(format!(
            "the two-solution construction needs ν < −2 (got ν = {}); for ν ≥ −2 the \
             zero-mode swirl already carries a free 1/r part",
            cfg.solver.nu
        )));
    }
    cfg.validate()?;
    prepare(dir, cfg)?;
    let (a, b, rep) = nonuniqueness_pair(&cfg.solver, &cfg.forcing_data(), &cfg.boundary_data(), cfg.delta_mu)?;
    write_modes(dir, &a)?;
    write_modes(&dir.join("tilde"), &b)?;
    write_file(&dir.join("separation.csv"), &separation_csv(&rep))?;
    if let Some(r) = &a.residual_report {
        write_file(&dir.join("residuals.csv"), &residual_csv(r))?;
    }
    let mut s = String::from("# nonunique\n");
    let _ = writeln!(s, "delta_mu = {:.6e}", rep.delta_mu);
    let _ = writeln!(s, "separation_at_half = {:.6e} (r = {:.6e})", rep.at_half.1, rep.at_half.0);
    let _ = writeln!(s, "separation_limit = {:.6e}", rep.limit_estimate);
    let _ = writeln!(s, "reduced_distance = {:.6e}", rep.reduced_distance);
    s.push_str("\n# first solution\n");
    bundle_summary(&mut s, &a);
    s.push_str("\n# second solution (mu + delta_mu)\n");
    bundle_summary(&mut s, &b);
    write_file(&dir.join("summary.txt"), &s)?;
    Ok(rep)
}

/// `calibrate`: bisection for the largest convergent data scale; the
/// threshold is merged into `calibration.txt` in `dir`.
pub fn run_calibrate(cfg: &RunConfig, dir: &Path) -> Result<Calibration<f64>> {
    cfg.validate()?;
    prepare(dir, cfg)?;
    let c = &cfg.calibrate;
    let cal = calibrate_threshold(
        &cfg.solver,
        &cfg.forcing_data(),
        &cfg.boundary_data(),
        c.scale_lo,
        c.scale_hi,
        c.steps,
    )?;
    let path = dir.join("calibration.txt");
    let mut cache = match read_file(&path) {
        Ok(t) => CalibrationCache::parse(&t)?,
        Err(_) => CalibrationCache::default(),
    };
    cache.insert(cfg.solver.nu, cfg.solver.mu, cal.threshold);
    write_file(&path, &cache.render())?;
    let mut s = String::from("# calibrate\n");
    let _ = writeln!(s, "converged_scale = {:.6e}", cal.converged_scale);
    match cal.failed_scale {
        Some(x) => {
            let _ = writeln!(s, "failed_scale = {x:.6e}");
        }
        None => {
            let _ = writeln!(s, "failed_scale = none");
        }
    }
    let _ = writeln!(s, "threshold = {:.6e}", cal.threshold);
    for (scale, ok, q) in &cal.probes {
        let _ = writeln!(s, "probe = {scale:.6e} {ok} {q:.6e}");
    }
    write_file(&dir.join("summary.txt"), &s)?;
    Ok(cal)
}

/// One closed-form linear check.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleLine {
    pub name: String,
    pub n_radial: usize,
    pub max_error: f64,
}

/// Linear solves with closed-form answers on the grid family (r_max, γ):
/// the zero-mode swirl r^{−2}ln r (ν = −3, f = r^{−4}), the zero-mode
/// vertical velocity ln r/r (ν = −1, f = r^{−3}) and the homogeneous swirl
/// modes g·𝒦_k(r)/𝒦_k(1) for k = 1, 2, 3 at the configured ν.
pub fn linear_oracles(nu: f64, r_max: f64, gamma: f64, n: usize) -> Result<Vec<OracleLine>> {
    let g = Arc::new(RadialGrid::graded(r_max, n, gamma)?);
    let max_err = |v: &[num_complex::Complex64], exact: &dyn Fn(f64) -> f64| {
        v.iter().zip(g.nodes()).map(|(v, &r)| (v - exact(r)).norm()).fold(0.0, f64::max)
    };
    let mut out = Vec::new();
    let f = Source::from_fn(&g, |s| creal(s.powi(-4)), Some(4.0));
    let s = solve_zero_swirl(&g, -3.0, &f, 0.0)?;
    out.push(OracleLine {
        name: "zero_swirl_log".into(),
        n_radial: n,
        max_error: max_err(&s.v_regular.values, &|r| r.ln() / (r * r)),
    });
    let f = Source::from_fn(&g, |s| creal(s.powi(-3)), Some(3.0));
    let (_, vz) = solve_zero_meridional(&g, -1.0, &f, 0.0)?;
    out.push(OracleLine {
        name: "zero_vertical_log".into(),
        n_radial: n,
        max_error: max_err(&vz.values, &|r| r.ln() / r),
    });
    for k in 1..=3i64 {
        let gk = creal(0.5);
        let v = solve_swirl_mode(&g, k, nu, &Source::zeros(g.len()), gk)?;
        let k1 = kernel_k(k, nu, 1.0, KernelFamily::Swirl)?;
        let exact = |r: f64| {
            let kr = kernel_k(k, nu, r, KernelFamily::Swirl).expect("r ≥ 1");
            0.5 * kr.value / k1.value * (kr.exp_shift - k1.exp_shift).exp()
        };
        out.push(OracleLine { name: format!("swirl_kernel_k{k}"), n_radial: n, max_error: max_err(&v.values, &exact) });
    }
    Ok(out)
}

/// `oracle`: the closed-form checks at N/4, N/2 and N with observed orders.
pub fn run_oracle(cfg: &RunConfig, dir: &Path) -> Result<Vec<OracleLine>> {
    prepare(dir, cfg)?;
    let s = &cfg.solver;
    let ns = [s.n_radial / 4, s.n_radial / 2, s.n_radial];
    let mut all = Vec::new();
    for &n in &ns {
        all.extend(linear_oracles(s.nu, s.r_max, s.grid_gamma, n.max(16))?);
    }
    let mut csv = String::from("name,n_radial,max_error\n");
    for l in &all {
        let _ = writeln!(csv, "{},{},{}", l.name, l.n_radial, fmt_num(l.max_error));
    }
    write_file(&dir.join("oracle.csv"), &csv)?;
    Ok(all)
}

/// `bessel`: scaled I_α, K_α and derivatives at the given arguments.
pub fn bessel_table(alpha: f64, xs: &[f64]) -> Result<String> {
    let o = BesselOrder::new(alpha)?;
    let mut s = String::from("x,I_exp_minus_x,K_exp_x,dI_exp_minus_x,dK_exp_x\n");
    for &x in xs {
        let (i, k) = (bessel_i(o, x)?, bessel_k(o, x)?);
        let (di, dk) = (bessel_i_prime(o, x)?, bessel_k_prime(o, x)?);
        let row = [x, i.mantissa, k.mantissa, di.mantissa, dk.mantissa];
        let cells: Vec<String> = row.iter().map(|&v| fmt_num(v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}

/// Directory a command writes to: the override, else `output_dir`.
pub fn output_dir(cfg: &RunConfig, over: Option<&Path>) -> PathBuf {
    over.map(Path::to_path_buf).unwrap_or_else(|| cfg.output_dir.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn solve_zero_data_reports_zero_solution() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("[physics]\nnu = -1\nmu = 0\n[grid]\nk_max = 2\nn_radial = 64\n").unwrap();
        let b = run_solve(&cfg, dir.path()).unwrap();
        assert_eq!(b.state.iterations, 1);
        let s = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
        assert!(s.contains("zero_solution = true") && s.contains("iterations = 1"), "{s}");
        for k in 0..=2 {
            assert!(dir.path().join(format!("mode_{k}.csv")).exists());
        }
        let back = parse_config(&std::fs::read_to_string(dir.path().join(CONFIG_COPY)).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn verify_passes_on_fresh_solution() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config(
            "[physics]\nnu = -1\nmu = 1\n[grid]\nk_max = 3\nn_radial = 512\n[boundary]\ntheta.1 = 1e-3, 0\n",
        )
        .unwrap();
        run_solve(&cfg, dir.path()).unwrap();
        let out = run_verify(&cfg, dir.path()).unwrap();
        assert!(out.passed, "{:?}", out.report.momentum);
    }

    #[test]
    fn nonunique_refused_in_weak_sink() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse_config("[physics]\nnu = -1\nmu = 1\n").unwrap();
        let e = run_nonunique(&cfg, dir.path()).unwrap_err();
        assert!(matches!(e, Error::Refused(_)));
        assert_eq!(e.class().exit_code(), 1);
    }

    #[test]
    fn oracle_errors_shrink() {
        let lines = linear_oracles(-1.0, 100.0, 2.0, 256).unwrap();
        assert_eq!(lines.len(), 5);
        assert!(lines.iter().all(|l| l.max_error < 1e-3), "{lines:?}");
    }

    #[test]
    fn bessel_table_shape() {
        let t = bessel_table(0.5, &[0.5, 2.0]).unwrap();
        assert_eq!(t.lines().count(), 3);
        // I_{1/2}(x)e^{−x} = (1 − e^{−2x})/√(2πx)
        let cells: Vec<f64> = t.lines().nth(2).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        let want = (1.0 - (-4.0f64).exp()) / (2.0 * std::f64::consts::PI * 2.0).sqrt();
        assert!((cells[1] - want).abs() < 1e-14);
    }
}
