//! Flat INI run configuration: parsing, validation and rendering.
//!
//! Sections and keys are listed in the README. Forcing and boundary entries
//! are keyed `component.k` with k ≥ 0; the conjugate mode −k is implied.

use std::fmt::Write as _;
use std::path::PathBuf;

use ini::Ini;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{BoundaryData, Component, DecayExponents, ForcingData, RadialFunction};
use crate::nonlinear::SolverConfig;

/// Named forcing profile families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ForcingFamily {
    /// A·r^{−p}
    PowerDecay { amplitude: Complex64, exponent: f64 },
    /// A·r^{−p}·e^{−rate(r−1)}
    PowerExpDecay { amplitude: Complex64, exponent: f64, rate: f64 },
}

impl ForcingFamily {
    pub fn to_radial(self) -> RadialFunction<f64> {
        match self {
            ForcingFamily::PowerDecay { amplitude, exponent } => {
                RadialFunction::PowerDecay { amplitude, exponent }
            }
            ForcingFamily::PowerExpDecay { amplitude, exponent, rate } => {
                RadialFunction::PowerExpDecay { amplitude, exponent, rate }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ForcingEntry {
    pub component: Component,
    pub k: u32,
    pub family: ForcingFamily,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEntry {
    pub component: Component,
    pub k: u32,
    pub value: Complex64,
}

/// Bisection window for `calibrate`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrateParams {
    pub scale_lo: f64,
    pub scale_hi: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub solver: SolverConfig<f64>,
    /// μ̃ − μ for the two-solution run.
    pub delta_mu: f64,
    /// Largest accepted momentum or divergence residual in `verify`.
    pub residual_tol: f64,
    pub forcing: Vec<ForcingEntry>,
    pub boundary: Vec<BoundaryEntry>,
    pub calibrate: CalibrateParams,
    pub output_dir: PathBuf,
}

impl RunConfig {
    /// Defaults around (ν, μ) with zero data.
    pub fn new(nu: f64, mu: f64) -> Self {
        Self {
            solver: SolverConfig::new(nu, mu),
            delta_mu: 0.05,
            residual_tol: 1e-6,
            forcing: Vec::new(),
            boundary: Vec::new(),
            calibrate: CalibrateParams { scale_lo: 1e-4, scale_hi: 1e2, steps: 12 },
            output_dir: PathBuf::from("out"),
        }
    }

    pub fn forcing_data(&self) -> ForcingData<f64> {
        let mut f = ForcingData::zero();
        for e in &self.forcing {
            f.set_real_mode(e.component, e.k as i64, e.family.to_radial());
        }
        f
    }

    pub fn boundary_data(&self) -> BoundaryData<f64> {
        let mut g = BoundaryData::zero();
        for e in &self.boundary {
            g.set_real_mode(e.component, e.k as i64, e.value);
        }
        g
    }

    /// Checks the hypotheses of the existence theory and the numeric knobs;
    /// all violations are reported together.
    pub fn validate(&self) -> Result<()> {
        let s = &self.solver;
        let d = &s.decay;
        let mut bad: Vec<String> = Vec::new();
        let mut need = |ok: bool, msg: &str| {
            if !ok {
                bad.push(msg.to_string());
            }
        };
        need(s.nu < 0.0, "ν < 0 required (the background must be a sink)");
        need(s.mu.is_finite(), "μ must be finite");
        need(d.lambda_theta > 3.0, "λ_θ > 3 required (decay of f_θ,0)");
        need(d.lambda_z > 2.0, "λ_z > 2 required (decay of f_z,0)");
        if s.linear_only {
            need(d.lambda > 1.0, "λ > 1 required for a linear-only run (decay of f_k, k ≠ 0)");
        } else {
            need(d.lambda > 1.5, "λ > 3/2 required (decay of f_k, k ≠ 0)");
        }
        need(s.r_max > 1.0, "r_max > 1 required");
        need(s.n_radial >= 16, "n_radial ≥ 16 required");
        need(s.grid_gamma >= 1.0, "grid_gamma ≥ 1 required");
        need(s.tol_picard > 0.0, "tol_picard > 0 required");
        need(s.max_iters >= 1, "max_iters ≥ 1 required");
        need(s.relaxation > 0.0 && s.relaxation <= 1.0, "relaxation in (0, 1] required");
        need(self.residual_tol > 0.0, "residual_tol > 0 required");
        need(s.z_samples == 0 || s.z_samples > 2 * s.k_max, "z_samples = 0 or ≥ 2K + 1 required");
        let c = &self.calibrate;
        need(c.scale_lo > 0.0 && c.scale_hi > c.scale_lo, "0 < scale_lo < scale_hi required");
        for e in &self.boundary {
            if e.component == Component::R && e.k == 0 && e.value.norm() != 0.0 {
                bad.push(
                    "g_r,0 = 0 required: the radial flux through the cylinder is carried by ν \
                     (normalisation of the background)"
                        .into(),
                );
            }
            if e.k == 0 && e.value.im != 0.0 {
                bad.push(format!("{}.0 must be real", e.component.name()));
            }
        }
        for e in &self.forcing {
            if e.k == 0 {
                let imag = match e.family {
                    ForcingFamily::PowerDecay { amplitude, .. }
                    | ForcingFamily::PowerExpDecay { amplitude, .. } => amplitude.im != 0.0,
                };
                if imag {
                    bad.push(format!("{}.0 forcing amplitude must be real", e.component.name()));
                }
            }
        }
        if bad.is_empty() {
            if let Err(e) = self.forcing_data().validate(d) {
                bad.push(e.to_string());
            }
            match s.tau() {
                Err(e) => bad.push(e.to_string()),
                Ok(t) if !(t.tau > 0.0) && !s.linear_only => bad.push("τ > 0 required".into()),
                Ok(_) => {}
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad.join("; ")))
        }
    }
}

const SECTIONS: [(&str, &[&str]); 8] = [
    ("physics", &["nu", "mu", "delta_mu"]),
    ("grid", &["k_max", "r_max", "n_radial", "grid_gamma"]),
    ("decay", &["lambda_theta", "lambda_z", "lambda"]),
    (
        "iteration",
        &["tol_picard", "max_iters", "relaxation", "residual_tol", "z_samples", "smallness", "linear_only"],
    ),
    ("calibrate", &["scale_lo", "scale_hi", "steps"]),
    ("output", &["output_dir"]),
    ("forcing", &[]),
    ("boundary", &[]),
];

/// 1-based line of `key` inside `[section]`, or of the section header.
fn line_of(text: &str, section: Option<&str>, key: Option<&str>) -> usize {
    let mut current: Option<String> = None;
    let mut header = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            if current.as_deref() == section {
                header = i + 1;
            }
            continue;
        }
        if current.as_deref() != section {
            continue;
        }
        if let (Some(k), Some((lhs, _))) = (key, line.split_once('=')) {
            if lhs.trim() == k {
                return i + 1;
            }
        }
    }
    header
}

struct Reader<'a> {
    text: &'a str,
}

impl Reader<'_> {
    fn err(&self, section: &str, key: &str, msg: impl std::fmt::Display) -> Error {
        Error::Parse {
            line: line_of(self.text, Some(section), Some(key)),
            msg: format!("[{section}] {key}: {msg}"),
        }
    }

    fn num<T: std::str::FromStr>(&self, ini: &Ini, section: &str, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match ini.get_from(Some(section), key) {
            None => Ok(default),
            Some(v) => v.trim().parse::<T>().map_err(|e| self.err(section, key, e)),
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    t.parse::<Complex64>().map_err(|_| format!("`{s}` is not a number or complex a+bi"))
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{:e}-{:e}i", z.re, -z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

fn parse_mode_key(key: &str) -> std::result::Result<(Component, u32), String> {
    let (c, k) = key.split_once('.').ok_or_else(|| format!("key `{key}` must be component.k"))?;
    let comp = Component::parse(c.trim()).ok_or_else(|| format!("unknown component `{c}` (r, theta, z)"))?;
    let k = k.trim().parse::<u32>().map_err(|_| format!("mode `{k}` must be an integer k ≥ 0"))?;
    Ok((comp, k))
}

fn parse_family(v: &str) -> std::result::Result<ForcingFamily, String> {
    let v = v.trim();
    let (name, rest) = v.split_once('(').ok_or_else(|| format!("`{v}`: expected name(args)"))?;
    let args = rest.strip_suffix(')').ok_or_else(|| format!("`{v}`: missing `)`"))?;
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    let real = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    match (name.trim(), parts.len()) {
        ("power_decay", 2) => {
            Ok(ForcingFamily::PowerDecay { amplitude: parse_complex(parts[0])?, exponent: real(parts[1])? })
        }
        ("power_exp_decay", 3) => Ok(ForcingFamily::PowerExpDecay {
            amplitude: parse_complex(parts[0])?,
            exponent: real(parts[1])?,
            rate: real(parts[2])?,
        }),
        ("power_decay", n) | ("power_exp_decay", n) => Err(format!("`{v}`: wrong number of arguments ({n})")),
        (other, _) => Err(format!("unknown forcing family `{other}` (power_decay, power_exp_decay)")),
    }
}

/// Parses and validates an INI document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg = parse_unvalidated(text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses without the hypothesis checks.
pub fn parse_unvalidated(text: &str) -> Result<RunConfig> {
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') && !line.ends_with(']') {
            return Err(Error::Parse { line: i + 1, msg: format!("unterminated section header `{line}`") });
        }
    }
    let opt = ini::ParseOption { enabled_escape: false, ..Default::default() };
    let ini = Ini::load_from_str_opt(text, opt)
        .map_err(|e| Error::Parse { line: e.line + 1, msg: e.msg.to_string() })?;
    let rd = Reader { text };
    for (name, props) in ini.iter() {
        let Some(name) = name else {
            if let Some((k, _)) = props.iter().next() {
                return Err(Error::Parse {
                    line: line_of(text, None, Some(k)),
                    msg: format!("key `{k}` outside a section"),
                });
            }
            continue;
        };
        let Some((_, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
            return Err(Error::Parse { line: line_of(text, Some(name), None), msg: format!("unknown section [{name}]") });
        };
        for (k, _) in props.iter() {
            if !keys.is_empty() && !keys.contains(&k) {
                return Err(rd.err(name, k, "unknown key"));
            }
        }
    }
    let nu: f64 = match ini.get_from(Some("physics"), "nu") {
        Some(_) => rd.num(&ini, "physics", "nu", 0.0)?,
        None => {
            return Err(Error::Parse {
                line: line_of(text, Some("physics"), None),
                msg: "[physics] nu is required".into(),
            })
        }
    };
    let mu: f64 = rd.num(&ini, "physics", "mu", 0.0)?;
    let mut c = RunConfig::new(nu, mu);
    c.delta_mu = rd.num(&ini, "physics", "delta_mu", c.delta_mu)?;
    let s = &mut c.solver;
    s.k_max = rd.num(&ini, "grid", "k_max", s.k_max)?;
    s.r_max = rd.num(&ini, "grid", "r_max", s.r_max)?;
    s.n_radial = rd.num(&ini, "grid", "n_radial", s.n_radial)?;
    s.grid_gamma = rd.num(&ini, "grid", "grid_gamma", s.grid_gamma)?;
    s.decay = DecayExponents {
        lambda_theta: rd.num(&ini, "decay", "lambda_theta", s.decay.lambda_theta)?,
        lambda_z: rd.num(&ini, "decay", "lambda_z", s.decay.lambda_z)?,
        lambda: rd.num(&ini, "decay", "lambda", s.decay.lambda)?,
    };
    s.tol_picard = rd.num(&ini, "iteration", "tol_picard", s.tol_picard)?;
    s.max_iters = rd.num(&ini, "iteration", "max_iters", s.max_iters)?;
    s.relaxation = rd.num(&ini, "iteration", "relaxation", s.relaxation)?;
    s.z_samples = rd.num(&ini, "iteration", "z_samples", s.z_samples)?;
    s.linear_only = rd.num(&ini, "iteration", "linear_only", s.linear_only)?;
    s.smallness = match ini.get_from(Some("iteration"), "smallness") {
        None => None,
        Some(v) if v.trim() == "none" => None,
        Some(_) => Some(rd.num(&ini, "iteration", "smallness", 0.0)?),
    };
    c.residual_tol = rd.num(&ini, "iteration", "residual_tol", c.residual_tol)?;
    c.calibrate.scale_lo = rd.num(&ini, "calibrate", "scale_lo", c.calibrate.scale_lo)?;
    c.calibrate.scale_hi = rd.num(&ini, "calibrate", "scale_hi", c.calibrate.scale_hi)?;
    c.calibrate.steps = rd.num(&ini, "calibrate", "steps", c.calibrate.steps)?;
    if let Some(d) = ini.get_from(Some("output"), "output_dir") {
        c.output_dir = PathBuf::from(d.trim());
    }
    if let Some(p) = ini.section(Some("forcing")) {
        for (k, v) in p.iter() {
            let (component, mode) = parse_mode_key(k).map_err(|m| rd.err("forcing", k, m))?;
            let family = parse_family(v).map_err(|m| rd.err("forcing", k, m))?;
            c.forcing.push(ForcingEntry { component, k: mode, family });
        }
    }
    if let Some(p) = ini.section(Some("boundary")) {
        for (k, v) in p.iter() {
            let (component, mode) = parse_mode_key(k).map_err(|m| rd.err("boundary", k, m))?;
            let parts: Vec<&str> = v.split(',').map(str::trim).collect();
            let value = match parts.as_slice() {
                [re, im] => {
                    let re = re.parse::<f64>().map_err(|e| rd.err("boundary", k, e))?;
                    let im = im.parse::<f64>().map_err(|e| rd.err("boundary", k, e))?;
                    Complex64::new(re, im)
                }
                [z] => parse_complex(z).map_err(|m| rd.err("boundary", k, m))?,
                _ => return Err(rd.err("boundary", k, "expected `re, im`")),
            };
            c.boundary.push(BoundaryEntry { component, k: mode, value });
        }
    }
    Ok(c)
}

/// INI text that parses back to `c`.
pub fn render_config(c: &RunConfig) -> String {
    let s = &c.solver;
    let mut o = String::new();
    let _ = writeln!(o, "[physics]\nnu = {:e}\nmu = {:e}\ndelta_mu = {:e}\n", s.nu, s.mu, c.delta_mu);
    let _ = writeln!(
        o,
        "[grid]\nk_max = {}\nr_max = {:e}\nn_radial = {}\ngrid_gamma = {:e}\n",
        s.k_max, s.r_max, s.n_radial, s.grid_gamma
    );
    let _ = writeln!(
        o,
        "[decay]\nlambda_theta = {:e}\nlambda_z = {:e}\nlambda = {:e}\n",
        s.decay.lambda_theta, s.decay.lambda_z, s.decay.lambda
    );
    let _ = writeln!(
        o,
        "[iteration]\ntol_picard = {:e}\nmax_iters = {}\nrelaxation = {:e}\nresidual_tol = {:e}\nz_samples = {}\nsmallness = {}\nlinear_only = {}\n",
        s.tol_picard,
        s.max_iters,
        s.relaxation,
        c.residual_tol,
        s.z_samples,
        s.smallness.map_or("none".to_string(), |x| format!("{x:e}")),
        s.linear_only
    );
    let _ = writeln!(
        o,
        "[calibrate]\nscale_lo = {:e}\nscale_hi = {:e}\nsteps = {}\n",
        c.calibrate.scale_lo, c.calibrate.scale_hi, c.calibrate.steps
    );
    let _ = writeln!(o, "[output]\noutput_dir = {}\n", c.output_dir.display());
    o.push_str("[forcing]\n");
    for e in &c.forcing {
        let v = match e.family {
            ForcingFamily::PowerDecay { amplitude, exponent } => {
                format!("power_decay({}, {:e})", fmt_complex(amplitude), exponent)
            }
            ForcingFamily::PowerExpDecay { amplitude, exponent, rate } => {
                format!("power_exp_decay({}, {:e}, {:e})", fmt_complex(amplitude), exponent, rate)
            }
        };
        let _ = writeln!(o, "{}.{} = {v}", e.component.name(), e.k);
    }
    o.push_str("\n[boundary]\n");
    for e in &c.boundary {
        let _ = writeln!(o, "{}.{} = {:e}, {:e}", e.component.name(), e.k, e.value.re, e.value.im);
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn minimal_config_gets_defaults_and_tau() {
        let c = parse_config("[physics]\nnu = -1\nmu = 0\n").unwrap();
        assert_eq!(c.solver.nu, -1.0);
        assert_eq!(c.solver.k_max, 8);
        assert!(c.forcing.is_empty() && c.boundary.is_empty());
        assert!((c.solver.tau().unwrap().tau - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_theta_boundary_rejected() {
        let e = parse_config("[physics]\nnu = -1\n[decay]\nlambda_theta = 3\n").unwrap_err();
        assert!(e.to_string().contains("λ_θ > 3 required"), "{e}");
        assert_eq!(e.class().exit_code(), 1);
    }

    #[test]
    fn radial_zero_mode_boundary_rejected() {
        let e = parse_config("[physics]\nnu = -1\n[boundary]\nr.0 = 0.1, 0\n").unwrap_err();
        assert!(e.to_string().contains("g_r,0 = 0 required"), "{e}");
        assert!(e.to_string().contains("normalisation"));
    }

    #[test]
    fn every_violation_is_listed() {
        let e = parse_config("[physics]\nnu = 1\n[decay]\nlambda_z = 2\nlambda = 1.5\n").unwrap_err();
        let s = e.to_string();
        assert!(s.contains("ν < 0") && s.contains("λ_z > 2") && s.contains("λ > 3/2"), "{s}");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "[physics]\nnu = -1\n\n[grid]\nk_max = eight\n";
        match parse_config(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        match parse_config("[physics]\nnu = -1\n[forcing]\ntheta.1 = gaussian(1, 2)\n") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("unknown forcing family"));
            }
            other => panic!("{other:?}"),
        }
        match parse_config("[physics]\nnu = -1\n[grid]\nkmax = 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        match parse_config("[physics\nnu = -1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("[grid]\nk_max = 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn data_entries() {
        let text = "[physics]\nnu = -3\nmu = 1\n[decay]\nlambda_theta = 10\nlambda_z = 10\nlambda = 10\n\
                    [forcing]\ntheta.0 = power_decay(1e-3, 10)\nz.1 = power_exp_decay(1e-3-2e-4i, 2, 0.5)\n\
                    [boundary]\ntheta.1 = 1e-3, -2e-3\nz.0 = 0.5\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.forcing.len(), 2);
        assert_eq!(
            c.forcing[1].family,
            ForcingFamily::PowerExpDecay { amplitude: Complex64::new(1e-3, -2e-4), exponent: 2.0, rate: 0.5 }
        );
        let g = c.boundary_data();
        assert_eq!(g.get(Component::Theta, -1), Complex64::new(1e-3, 2e-3));
        assert_eq!(g.get(Component::Z, 0), Complex64::new(0.5, 0.0));
        let f = c.forcing_data();
        assert!(f.get(Component::Z, -1).is_some());
    }

    #[test]
    fn slow_forcing_rejected_by_class() {
        let e = parse_config("[physics]\nnu = -1\n[forcing]\ntheta.0 = power_decay(1, 3.5)\n").unwrap_err();
        assert!(matches!(e, Error::Config(_)), "{e}");
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e3f64..1e3, (-30i32..30).prop_map(|e| 1.2345678901234567 * 10f64.powi(e))]
    }

    fn component() -> impl Strategy<Value = Component> {
        prop_oneof![Just(Component::R), Just(Component::Theta), Just(Component::Z)]
    }

    fn family() -> impl Strategy<Value = ForcingFamily> {
        prop_oneof![
            (finite(), finite(), finite()).prop_map(|(a, b, p)| ForcingFamily::PowerDecay {
                amplitude: Complex64::new(a, b),
                exponent: p
            }),
            (finite(), finite(), finite(), finite()).prop_map(|(a, b, p, q)| ForcingFamily::PowerExpDecay {
                amplitude: Complex64::new(a, b),
                exponent: p,
                rate: q
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn render_parse_round_trip(
            nu in finite(), mu in finite(), dmu in finite(),
            k_max in 0usize..40, n in 16usize..5000,
            lt in finite(), lz in finite(), l in finite(),
            tol in finite(), iters in 1usize..500, linear in any::<bool>(),
            small in proptest::option::of(finite()),
            forcing in proptest::collection::vec((component(), 0u32..9, family()), 0..5),
            boundary in proptest::collection::vec((component(), 0u32..9, finite(), finite()), 0..5),
        ) {
            let mut c = RunConfig::new(nu, mu);
            c.delta_mu = dmu;
            c.solver.k_max = k_max;
            c.solver.n_radial = n;
            c.solver.decay = DecayExponents { lambda_theta: lt, lambda_z: lz, lambda: l };
            c.solver.tol_picard = tol;
            c.solver.max_iters = iters;
            c.solver.linear_only = linear;
            c.solver.smallness = small;
            c.output_dir = PathBuf::from("runs/case 1");
            // keys are unique per (component, k)
            let mut seen = std::collections::BTreeSet::new();
            for (comp, k, fam) in forcing {
                if seen.insert((comp.name(), k)) {
                    c.forcing.push(ForcingEntry { component: comp, k, family: fam });
                }
            }
            seen.clear();
            for (comp, k, re, im) in boundary {
                if seen.insert((comp.name(), k)) {
                    c.boundary.push(BoundaryEntry { component: comp, k, value: Complex64::new(re, im) });
                }
            }
            let back = parse_unvalidated(&render_config(&c)).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
