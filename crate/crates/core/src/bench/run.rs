use std::time::Instant;

use rayon::prelude::*;

use super::config::{GridConfig, SpcaRunConfig, SweepConfig};
use super::fit::{fit_scaling, ScalingFit};
use crate::error::{Error, Result};
use crate::linalg::{norm_inf, sym_eigen};
use crate::model::synthetic_instance;
use crate::rng::{mix_seed, trial_seed};
use crate::spca::{
    empirical_covariance, sample_spiked, spca_solve, SpcaConfig, SpcaDiagnostics, SpcaTermination, SpikedModel,
};
use crate::scalar::Sparsity;
use crate::solver::{error_metric, solve};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRecord {
    pub s: usize,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    /// `min(‖β̂ − β*‖, ‖β̂ + β*‖)`; `‖β*‖` when the solve failed.
    pub error: f64,
    pub iterations: usize,
    pub runtime_seconds: f64,
    pub converged: bool,
    /// The `λ` actually used.
    pub lambda: f64,
}

impl ExperimentRecord {
    fn key(&self) -> (usize, usize, usize) {
        (self.s, self.n, self.trial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub s: usize,
    pub n: usize,
    pub quantile_error: f64,
    pub success_rate: f64,
}

/// Everything needed to run one trial.
#[derive(Debug, Clone, Copy)]
pub struct TrialSpec<'a> {
    pub p: usize,
    pub s: usize,
    pub n: usize,
    pub trial: usize,
    pub base_seed: u64,
    pub grid: &'a GridConfig,
}

/// Generates the trial's instance, solves it and scores the estimate.
/// Solver failures become worst-case records instead of errors.
pub fn run_trial(spec: TrialSpec<'_>) -> Result<ExperimentRecord> {
    let TrialSpec {
        p,
        s,
        n,
        trial,
        base_seed,
        grid,
    } = spec;
    let seed = trial_seed(base_seed, s, n, trial);
    let inst = synthetic_instance::<f64>(p, s, n, grid.beta_norm, grid.noise, seed)?;
    let truth = inst.truth.as_ref().expect("synthetic instances carry truth");
    let y_max = norm_inf(inst.observations.view());
    let lambda = grid.lambda_rule.lambda(p, s, n, &grid.noise, grid.beta_norm, y_max);
    let worst = ExperimentRecord {
        s,
        n,
        trial,
        seed,
        error: truth.norm,
        iterations: 0,
        runtime_seconds: 0.0,
        converged: false,
        lambda,
    };
    if !(lambda > 0.0) {
        // y = 0 under the relative rule: nothing to fit.
        return Ok(worst);
    }
    let cfg = grid.solver.to_config(lambda, Sparsity::from_usize(s)?)?;
    let start = Instant::now();
    let outcome = solve(&inst, &cfg).and_then(|out| {
        let est = out.estimate()?;
        Ok((out, est))
    });
    let runtime = if grid.record_runtime {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    Ok(match outcome {
        Ok((out, est)) => ExperimentRecord {
            error: error_metric(est.beta_hat.view(), truth.beta_star.view())?,
            iterations: out.diagnostics.total_inner_iterations,
            runtime_seconds: runtime,
            converged: out.diagnostics.converged,
            ..worst
        },
        Err(_) => ExperimentRecord {
            runtime_seconds: runtime,
            ..worst
        },
    })
}

/// Order statistic at index `⌈q T⌉ − 1` of the sorted values.
pub fn quantile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Parameter("quantile of an empty set".into()));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Parameter(format!("quantile level must lie in (0, 1), got {q}")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    Ok(v[idx])
}

/// Per-`(s, n)` quantile error and success rate; `records` must be sorted.
pub fn summarize(records: &[ExperimentRecord], q: f64, success: f64, beta_norm: f64) -> Result<Vec<SummaryRow>> {
    let mut out = Vec::new();
    for cell in records.chunk_by(|a, b| (a.s, a.n) == (b.s, b.n)) {
        let errors: Vec<f64> = cell.iter().map(|r| r.error).collect();
        let wins = errors.iter().filter(|e| **e <= success * beta_norm).count();
        out.push(SummaryRow {
            s: cell[0].s,
            n: cell[0].n,
            quantile_error: quantile(&errors, q)?,
            success_rate: wins as f64 / errors.len() as f64,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GridOutcome {
    /// Sorted by `(s, n, trial)`.
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<SummaryRow>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub records: Vec<ExperimentRecord>,
    pub summary: Vec<SummaryRow>,
    pub fit: ScalingFit,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))
}

/// Runs every `(s, n, trial)` of the grid on `threads` workers. Output is
/// independent of the worker count.
pub fn run_phase_grid(cfg: &GridConfig, threads: usize) -> Result<GridOutcome> {
    cfg.validate()?;
    let mut tasks = Vec::new();
    for &s in &cfg.s_values {
        for &n in &cfg.n_values {
            for trial in 0..cfg.trials {
                tasks.push(TrialSpec {
                    p: cfg.p,
                    s,
                    n,
                    trial,
                    base_seed: cfg.base_seed,
                    grid: cfg,
                });
            }
        }
    }
    let mut records = pool(threads)?.install(|| tasks.into_par_iter().map(run_trial).collect::<Result<Vec<_>>>())?;
    records.sort_by_key(ExperimentRecord::key);
    let summary = summarize(&records, cfg.quantile, cfg.success_threshold, cfg.beta_norm)?;
    Ok(GridOutcome { records, summary })
}

/// Errors versus `s` at fixed `(p, n)`, with the min-MAD fit of
/// `c √(s log(e p / s))` to the per-`s` quantile errors.
pub fn run_sparsity_sweep(cfg: &SweepConfig, threads: usize) -> Result<SweepOutcome> {
    cfg.validate()?;
    let grid = run_phase_grid(&cfg.as_grid(), threads)?;
    let errors: Vec<f64> = grid.summary.iter().map(|r| r.quantile_error).collect();
    let s_values: Vec<usize> = grid.summary.iter().map(|r| r.s).collect();
    let fit = fit_scaling(&errors, &s_values, cfg.p)?;
    Ok(SweepOutcome {
        records: grid.records,
        summary: grid.summary,
        fit,
    })
}

/// Outcome of one sparse PCA trial.
#[derive(Debug, Clone)]
pub struct SpcaTrialRecord {
    pub trial: usize,
    pub seed: u64,
    /// `|⟨û, v₁⟩|` for the leading factor direction (0 when empty).
    pub alignment: f64,
    /// Same for the top eigenvector of `Σ̂`.
    pub pca_alignment: f64,
    pub max_trace: f64,
    pub max_increase: f64,
    pub status: SpcaTermination,
    pub diagnostics: SpcaDiagnostics<f64>,
}

pub fn run_spca_trials(cfg: &SpcaRunConfig, threads: usize) -> Result<Vec<SpcaTrialRecord>> {
    cfg.validate()?;
    let one = |trial: usize| -> Result<SpcaTrialRecord> {
        let seed = mix_seed(&[cfg.base_seed, cfg.p as u64, cfg.n as u64, trial as u64]);
        let model = SpikedModel::random(cfg.p, cfg.s, cfg.n, cfg.sigma1, cfg.sigma2, mix_seed(&[seed, 1]))?;
        let samples = sample_spiked(&model, mix_seed(&[seed, 2]));
        let cov = empirical_covariance(samples.view())?;
        let out = spca_solve(&cov.sigma_hat, &SpcaConfig::new(cfg.lambda, Sparsity::from_usize(cfg.s)?))?;
        let alignment = out.leading_direction().map_or(0.0, |d| d.dot(&model.v1).abs());
        let (_, vecs) = sym_eigen(&cov.sigma_hat);
        let pca_alignment = vecs.column(0).dot(&model.v1).abs();
        Ok(SpcaTrialRecord {
            trial,
            seed,
            alignment,
            pca_alignment,
            max_trace: out.diagnostics.max_trace(),
            max_increase: out.diagnostics.max_increase(),
            status: out.diagnostics.status,
            diagnostics: out.diagnostics,
        })
    };
    pool(threads)?.install(|| (0..cfg.trials).into_par_iter().map(one).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_matches_sorted_index() {
        assert_eq!(quantile(&[0.7], 0.8).unwrap(), 0.7);
        let v = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(quantile(&v, 0.8).unwrap(), 4.0);
        assert_eq!(quantile(&v, 0.81).unwrap(), 5.0);
        assert_eq!(quantile(&v, 0.1).unwrap(), 1.0);
        assert!(quantile(&[], 0.5).is_err());
    }
}
