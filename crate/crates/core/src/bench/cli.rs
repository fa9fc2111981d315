//! `sparselift` command line.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{GridConfig, LambdaRule, SolveRunConfig, SpcaRunConfig, SweepConfig};
use super::csv::{write_fit, write_lambdas, write_records, write_summary};
use super::run::{run_phase_grid, run_spca_trials, run_sparsity_sweep};
use super::THREADS_ENV;
use crate::error::{Error, Result};
use crate::linalg::norm_inf;
use crate::model::{synthetic_instance, NoiseConfig};
use crate::scalar::Sparsity;
use crate::solver::{error_metric, solve, write_diagnostics_csv};
use crate::spca::write_spca_diagnostics_csv;

#[derive(Debug, Parser)]
#[command(name = "sparselift", version, about = "Sparse phase retrieval with a mixed atomic matrix norm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the configured base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: SPARSELIFT_THREADS, else all cores)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one synthetic instance (from --config or the flags below)
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        s: usize,
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Gaussian noise level; 0 for noiseless
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        /// Fixed λ; defaults to the scaled rule (noisy) or 1e-4·‖y‖∞ (noiseless)
        #[arg(long)]
        lambda: Option<f64>,
        /// Use the symmetric (PSD) parameterisation u_k = v_k
        #[arg(long)]
        symmetric: bool,
    },
    /// Phase-transition grid over (s, n)
    PhaseGrid {
        #[command(flatten)]
        common: Common,
    },
    /// Error versus s at fixed (p, n), with the scaling fit
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Experimental sparse PCA on spiked covariance data
    Spca {
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() || matches!(e, Error::CertificateInconsistency(_)) {
        3
    } else {
        2
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(line) => {
            println!("{line}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn require_config(common: &Common) -> Result<&Path> {
    common
        .config
        .as_deref()
        .ok_or_else(|| Error::Config("--config is required for this command".into()))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn dispatch(command: Command) -> Result<String> {
    match command {
        Command::Solve {
            common,
            p,
            s,
            n,
            sigma,
            lambda,
            symmetric,
        } => {
            let mut cfg = match &common.config {
                Some(path) => SolveRunConfig::from_path(path)?,
                None => {
                    let noise = if sigma > 0.0 {
                        NoiseConfig::gaussian(sigma)
                    } else {
                        NoiseConfig::NONE
                    };
                    let lambda_rule = match lambda {
                        Some(v) => LambdaRule::Fixed(v),
                        None if sigma > 0.0 => LambdaRule::Scaled(1.0),
                        None => LambdaRule::RelativeToMax(1e-4),
                    };
                    let mut c = SolveRunConfig {
                        p,
                        s,
                        n,
                        noise,
                        beta_norm: 1.0,
                        lambda_rule,
                        seed: 0,
                        solver: Default::default(),
                    };
                    c.solver.symmetric = symmetric;
                    c.validate()?;
                    c
                }
            };
            if let Some(seed) = common.seed {
                cfg.seed = seed;
            }
            run_solve(&cfg, &common.out)
        }
        Command::PhaseGrid { common } => {
            let mut cfg = GridConfig::from_path(require_config(&common)?)?;
            if let Some(seed) = common.seed {
                cfg.base_seed = seed;
            }
            let out = run_phase_grid(&cfg, threads(common.threads))?;
            write_records(&out.records, create(&common.out, "records.csv")?)?;
            write_summary(&out.summary, create(&common.out, "summary.csv")?)?;
            write_lambdas(&out.records, create(&common.out, "lambda.csv")?)?;
            let failed = out.records.iter().filter(|r| !r.converged).count();
            Ok(format!(
                "phase-grid: {} cells, {} records ({} unconverged) -> {}",
                out.summary.len(),
                out.records.len(),
                failed,
                common.out.display()
            ))
        }
        Command::Sweep { common } => {
            let mut cfg = SweepConfig::from_path(require_config(&common)?)?;
            if let Some(seed) = common.seed {
                cfg.base_seed = seed;
            }
            let out = run_sparsity_sweep(&cfg, threads(common.threads))?;
            write_records(&out.records, create(&common.out, "records.csv")?)?;
            write_summary(&out.summary, create(&common.out, "summary.csv")?)?;
            write_fit(&out.fit, create(&common.out, "fit.csv")?)?;
            write_lambdas(&out.records, create(&common.out, "lambda.csv")?)?;
            Ok(format!(
                "sweep: {} sparsity levels, c = {:.6}, mad = {:.6} -> {}",
                out.summary.len(),
                out.fit.c,
                out.fit.mad,
                common.out.display()
            ))
        }
        Command::Spca { common } => {
            let mut cfg = SpcaRunConfig::from_path(require_config(&common)?)?;
            if let Some(seed) = common.seed {
                cfg.base_seed = seed;
            }
            let trials = run_spca_trials(&cfg, threads(common.threads))?;
            let mut w = create(&common.out, "spca.csv")?;
            use std::io::Write;
            writeln!(w, "trial,seed,alignment,pca_alignment,max_trace,max_increase,status")?;
            for t in &trials {
                writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:?}",
                    t.trial, t.seed, t.alignment, t.pca_alignment, t.max_trace, t.max_increase, t.status
                )?;
            }
            if let Some(first) = trials.first() {
                write_spca_diagnostics_csv(&first.diagnostics, create(&common.out, "diagnostics.csv")?)?;
            }
            let mut a: Vec<f64> = trials.iter().map(|t| t.alignment).collect();
            let mut b: Vec<f64> = trials.iter().map(|t| t.pca_alignment).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            Ok(format!(
                "spca (experimental): {} trials, median alignment {:.4} vs pca {:.4} -> {}",
                trials.len(),
                a[a.len() / 2],
                b[b.len() / 2],
                common.out.display()
            ))
        }
    }
}

fn run_solve(cfg: &SolveRunConfig, out_dir: &Path) -> Result<String> {
    let inst = synthetic_instance::<f64>(cfg.p, cfg.s, cfg.n, cfg.beta_norm, cfg.noise, cfg.seed)?;
    let truth = inst.truth.as_ref().expect("synthetic instances carry truth");
    let y_max = norm_inf(inst.observations.view());
    let lambda = cfg.lambda_rule.lambda(cfg.p, cfg.s, cfg.n, &cfg.noise, cfg.beta_norm, y_max);
    let solver_cfg = cfg.solver.to_config(lambda, Sparsity::from_usize(cfg.s)?)?;
    let out = solve(&inst, &solver_cfg)?;
    let est = out.estimate()?;
    let err = error_metric(est.beta_hat.view(), truth.beta_star.view())?;
    write_diagnostics_csv(&out.diagnostics, create(out_dir, "diagnostics.csv")?)?;
    let mut w = create(out_dir, "estimate.csv")?;
    use std::io::Write;
    writeln!(w, "index,beta_hat,beta_star")?;
    for (i, (a, b)) in est.beta_hat.iter().zip(&truth.beta_star).enumerate() {
        writeln!(w, "{i},{a:.16e},{b:.16e}")?;
    }
    Ok(format!(
        "solve: p={} s={} n={} lambda={:.6e} error={:.6e} rank={} converged={} status={:?}",
        cfg.p,
        cfg.s,
        cfg.n,
        lambda,
        err,
        out.factors().rank(),
        out.diagnostics.converged,
        out.diagnostics.status
    ))
}
