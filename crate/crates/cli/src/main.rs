//! `asns`: command-line driver for the exterior-cylinder solver.
//!
//! Exit codes: 0 ok, 1 config, 2 numeric, 3 convergence, 4 io.
//! `ASNS_THREADS` fixes the worker count; `RUST_LOG` controls logging.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asns_core::config::{parse_config, RunConfig};
use asns_core::output::{read_file, residual_text};
use asns_core::run::{
    bessel_table, output_dir, run_calibrate, run_nonunique, run_oracle, run_solve, run_verify, CONFIG_COPY,
};
use asns_core::{Error, ErrorClass};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "asns", version, about = "Steady axisymmetric Navier-Stokes flow outside a periodic cylinder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Picard solve; writes mode CSVs, residuals.csv and summary.txt.
    Solve {
        #[arg(short, long)]
        config: PathBuf,
        /// Overrides [output] output_dir.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Recomputes the residuals of a stored solution.
    Verify {
        /// Solution directory.
        #[arg(short, long)]
        dir: PathBuf,
        /// Defaults to the config.ini copy inside the directory.
        #[arg(short, long)]
        config: Option<PathBuf>,
    },
    /// Two solutions with the same data (ν < −2 only).
    Nonunique {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Scaled modified Bessel functions I_α(x)e^{−x}, K_α(x)e^{x} and derivatives.
    Bessel {
        #[arg(short, long)]
        alpha: f64,
        /// Comma-separated arguments.
        #[arg(short, long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
    /// Closed-form linear checks at N/4, N/2 and N.
    Oracle {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Largest convergent data scale by bisection.
    Calibrate {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<RunConfig, Error> {
    parse_config(&read_file(path)?)
}

fn init_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("ASNS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("ASNS_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Ok(true) on success, Ok(false) when `verify` finds residuals above tolerance.
fn execute(cmd: Command) -> Result<bool, Error> {
    match cmd {
        Command::Solve { config, out } => {
            let cfg = load(&config)?;
            let dir = output_dir(&cfg, out.as_deref());
            let b = run_solve(&cfg, &dir)?;
            println!(
                "converged in {} iterations (contraction {:.3e}); tau = {:.4}; output in {}",
                b.state.iterations,
                b.state.contraction_estimate,
                b.tau.tau,
                dir.display()
            );
            if let Some(r) = &b.residual_report {
                print!("{}", residual_text(r));
            }
        }
        Command::Verify { dir, config } => {
            let cfg = load(&config.unwrap_or_else(|| dir.join(CONFIG_COPY)))?;
            let v = run_verify(&cfg, &dir)?;
            print!("{}", residual_text(&v.report));
            println!("residual_tol = {:.6e}", cfg.residual_tol);
            println!("passed = {}", v.passed);
            return Ok(v.passed);
        }
        Command::Nonunique { config, out } => {
            let cfg = load(&config)?;
            let dir = output_dir(&cfg, out.as_deref());
            let s = run_nonunique(&cfg, &dir)?;
            println!(
                "r*(u_theta - u~_theta) at r = {:.4}: {:.6e} (limit {:.6e}); distance {:.3e}",
                s.at_half.0, s.at_half.1, s.limit_estimate, s.reduced_distance
            );
        }
        Command::Bessel { alpha, x } => print!("{}", bessel_table(alpha, &x)?),
        Command::Oracle { config, out } => {
            let cfg = load(&config)?;
            let dir = output_dir(&cfg, out.as_deref());
            for l in run_oracle(&cfg, &dir)? {
                println!("{:<20} N = {:<6} max error {:.3e}", l.name, l.n_radial, l.max_error);
            }
        }
        Command::Calibrate { config, out } => {
            let cfg = load(&config)?;
            let dir = output_dir(&cfg, out.as_deref());
            let c = run_calibrate(&cfg, &dir)?;
            println!(
                "converged up to scale {:.4e} (data size {:.4e}); failed at {}",
                c.converged_scale,
                c.threshold,
                c.failed_scale.map_or("none".into(), |s| format!("{s:.4e}"))
            );
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| execute(cli.command));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error[numeric]: residuals exceed residual_tol");
            ExitCode::from(ErrorClass::Numeric.exit_code() as u8)
        }
        Err(e) => {
            let class = e.class();
            eprintln!("error[{}]: {e}", class.name());
            ExitCode::from(class.exit_code() as u8)
        }
    }
}
