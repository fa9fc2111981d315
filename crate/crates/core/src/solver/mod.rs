//! The factored estimator: alternating proximal-gradient blocks, rebalancing,
//! stationarity and 1-sparse certificate checks, greedy atom addition.

mod apg;
mod certificate;
mod config;
mod estimate;
mod init;
mod inner;
mod objective;
mod rebalance;

use std::io::Write;

use ndarray::Array1;

pub use certificate::{add_atom, certificate_1sparse, max_certificate_entry, AtomAddition, DualCertificate};
pub use config::{SolverConfig, SolverSettings};
pub use estimate::{error_metric, extract_estimate, Estimate};
pub use init::{spectral_init, support_scores, SpectralInit};
pub use inner::{inner_minimize, InnerOutcome, Side};
pub use objective::{objective, residuals};
pub use rebalance::{pair_stationarity, rebalance, rescale_pairs, stationarity_gap};

use crate::error::{Error, Result};
use crate::factored::FactoredMatrix;
use crate::model::ProblemInstance;
use crate::scalar::Scalar;

/// Absolute slack allowed when asserting a non-increasing objective.
pub const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry<S> {
    pub iter: usize,
    pub objective: S,
    pub rank: usize,
    pub stationarity_gap: S,
    /// Certificate maximum, when it was evaluated at this iterate.
    pub cert_max: Option<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Certificate below threshold.
    Converged,
    RankCap,
    MaxOuter,
}

#[derive(Debug, Clone)]
pub struct Diagnostics<S> {
    pub history: Vec<HistoryEntry<S>>,
    /// Certificate held and every pair met the stationarity tolerance.
    pub converged: bool,
    pub status: Termination,
    pub outer_iterations: usize,
    pub total_inner_iterations: usize,
    pub final_certificate: Option<DualCertificate<S>>,
    pub final_gap: S,
    pub init_degenerate: bool,
}

impl<S: Scalar> Diagnostics<S> {
    /// Largest step-to-step objective increase in the history (≤ 0 when monotone).
    pub fn max_increase(&self) -> S {
        self.history
            .windows(2)
            .map(|w| w[1].objective - w[0].objective)
            .fold(S::neg_infinity(), S::max)
    }
}

/// Iterate state owned by one solve.
#[derive(Debug, Clone)]
pub struct SolverState<S> {
    pub factors: FactoredMatrix<S>,
    pub residuals: Array1<S>,
    pub objective: S,
    pub outer_iter: usize,
}

#[derive(Debug, Clone)]
pub struct SolveOutput<S> {
    pub state: SolverState<S>,
    pub diagnostics: Diagnostics<S>,
}

impl<S: Scalar> SolveOutput<S> {
    pub fn factors(&self) -> &FactoredMatrix<S> {
        &self.state.factors
    }

    pub fn estimate(&self) -> Result<Estimate<S>> {
        extract_estimate(&self.state.factors)
    }
}

struct Tracker<S> {
    history: Vec<HistoryEntry<S>>,
    iter: usize,
}

impl<S: Scalar> Tracker<S> {
    fn record(&mut self, objective: S, rank: usize, gap: S, f: &FactoredMatrix<S>) -> Result<()> {
        if !objective.is_finite() {
            return Err(Error::Numerical {
                message: "objective became non-finite".into(),
                diagnostics: format!("iter {}, rank {rank}", self.iter),
            });
        }
        if let Some(prev) = self.history.last() {
            if objective > prev.objective + S::lit(MONOTONE_SLACK) {
                return Err(Error::Numerical {
                    message: "objective increased".into(),
                    diagnostics: format!(
                        "iter {}: {} -> {} (rank {}, p {})",
                        self.iter,
                        prev.objective,
                        objective,
                        rank,
                        f.dim()
                    ),
                });
            }
        }
        self.history.push(HistoryEntry {
            iter: self.iter,
            objective,
            rank,
            stationarity_gap: gap,
            cert_max: None,
        });
        self.iter += 1;
        Ok(())
    }
}

fn relative_decrease<S: Scalar>(before: S, after: S) -> S {
    (before - after) / before.abs().max(S::min_positive_value())
}

/// Runs the atom-adding heuristic from a spectral initialisation.
///
/// Between certificate checks the U and V blocks are minimised alternately,
/// followed by rebalancing and exact pair rescaling, until the relative
/// objective decrease of a round falls below `inner_tol` and every pair meets
/// `stationarity_tol`. The objective is checked to be non-increasing across
/// every recorded iterate.
pub fn solve<S: Scalar>(inst: &ProblemInstance<S>, cfg: &SolverConfig<S>) -> Result<SolveOutput<S>> {
    cfg.validate()?;
    let init = spectral_init(inst, cfg)?;
    let mut f = rebalance(&init.factors, &cfg.s);
    let mut tracker = Tracker {
        history: Vec::new(),
        iter: 0,
    };
    let mut obj = objective(inst, &f, cfg)?;
    let mut gap = stationarity_gap(inst, &f, cfg)?;
    tracker.record(obj, f.rank(), gap, &f)?;

    let mut total_inner = 0;
    let mut status = Termination::MaxOuter;
    let mut final_certificate = None;
    let mut outer = 0;
    // Accepted steps carry over between block solves; doubling lets the
    // step grow back when curvature drops, backtracking shrinks it again.
    let mut hints: [Option<S>; 2] = [None, None];
    let mut block = |f: &FactoredMatrix<S>, side: Side, total: &mut usize| -> Result<FactoredMatrix<S>> {
        let slot = side as usize;
        let out = inner::inner_minimize_from(inst, f, cfg, side, hints[slot])?;
        hints[slot] = Some(out.step * S::lit(2.0));
        *total += out.iterations;
        Ok(out.factors)
    };
    while outer < cfg.max_outer_iters {
        outer += 1;
        for _ in 0..cfg.max_alternations {
            if f.is_empty() {
                break;
            }
            let before = obj;
            f = block(&f, Side::U, &mut total_inner)?;
            if !cfg.symmetric {
                f = block(&f, Side::V, &mut total_inner)?;
            }
            f = rebalance(&f, &cfg.s);
            f = rescale_pairs(inst, &f, cfg)?;
            obj = objective(inst, &f, cfg)?;
            gap = stationarity_gap(inst, &f, cfg)?;
            tracker.record(obj, f.rank(), gap, &f)?;
            if relative_decrease(before, obj) < cfg.inner_tol && gap <= cfg.stationarity_tol {
                break;
            }
        }

        let cert = certificate_1sparse(inst, &f, cfg)?;
        if let Some(last) = tracker.history.last_mut() {
            last.cert_max = Some(cert.max_entry);
        }
        final_certificate = Some(cert);
        if cert.holds() {
            status = Termination::Converged;
            break;
        }
        if f.rank() >= cfg.max_rank {
            status = Termination::RankCap;
            break;
        }
        f = add_atom(inst, &f, cfg, cert.location)?.factors;
        obj = objective(inst, &f, cfg)?;
        gap = stationarity_gap(inst, &f, cfg)?;
        tracker.record(obj, f.rank(), gap, &f)?;
    }

    let r = residuals(inst, &f)?;
    let converged = status == Termination::Converged && gap <= cfg.stationarity_tol;
    Ok(SolveOutput {
        state: SolverState {
            factors: f,
            residuals: r,
            objective: obj,
            outer_iter: outer,
        },
        diagnostics: Diagnostics {
            history: tracker.history,
            converged,
            status,
            outer_iterations: outer,
            total_inner_iterations: total_inner,
            final_certificate,
            final_gap: gap,
            init_degenerate: init.degenerate,
        },
    })
}

/// Writes `iter,objective,rank,stationarity_gap,cert_max`; the last column is
/// empty where the certificate was not evaluated.
pub fn write_diagnostics_csv<S: Scalar, W: Write>(diag: &Diagnostics<S>, mut w: W) -> Result<()> {
    writeln!(w, "iter,objective,rank,stationarity_gap,cert_max")?;
    for h in &diag.history {
        let cert = h.cert_max.map(|c| format!("{:.16e}", c.to_f64_lossy())).unwrap_or_default();
        writeln!(
            w,
            "{},{:.16e},{},{:.16e},{}",
            h.iter,
            h.objective.to_f64_lossy(),
            h.rank,
            h.stationarity_gap.to_f64_lossy(),
            cert
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{synthetic_instance, NoiseConfig};
    use crate::scalar::Sparsity;
    use ndarray::{array, Array2};

    #[test]
    fn zero_observations_large_lambda() {
        let inst = ProblemInstance::new(
            Array2::from_shape_fn((6, 3), |(i, j)| ((i * 3 + j) as f64).sin()),
            Array1::zeros(6),
            NoiseConfig::NONE,
            0,
        )
        .unwrap();
        let cfg = SolverConfig::new(10.0, Sparsity::new(1.0).unwrap());
        let out = solve(&inst, &cfg).unwrap();
        assert!(out.state.factors.pairs().iter().all(|q| q.is_zero()));
        assert_eq!(out.state.objective, 0.0);
        assert!(out.diagnostics.converged);
    }

    #[test]
    fn scalar_problem_reaches_closed_form() {
        // n = p = 1, x = 1, y = 1: min ½(1 − b)² + λ·4b over b ≥ 0 gives b = 1 − 4λ.
        let inst = ProblemInstance::new(array![[1.0f64]], array![1.0], NoiseConfig::NONE, 0).unwrap();
        let lambda = 1e-3;
        let cfg = SolverConfig::new(lambda, Sparsity::new(1.0).unwrap());
        let out = solve(&inst, &cfg).unwrap();
        let b = out.state.factors.to_dense()[[0, 0]];
        assert!((b - (1.0 - 4.0 * lambda)).abs() < 1e-6, "b = {b}");
        assert!((out.state.residuals[0] - 4.0 * lambda).abs() < 1e-6);
    }

    #[test]
    fn history_is_monotone_and_csv_has_header() {
        let inst = synthetic_instance::<f64>(20, 2, 80, 1.0, NoiseConfig::gaussian(0.05), 4).unwrap();
        let cfg = SolverConfig::new(0.02, Sparsity::new(2.0).unwrap());
        let out = solve(&inst, &cfg).unwrap();
        assert!(out.diagnostics.max_increase() <= MONOTONE_SLACK);
        let mut buf = Vec::new();
        write_diagnostics_csv(&out.diagnostics, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("iter,objective,rank,stationarity_gap,cert_max\n"));
        assert_eq!(text.lines().count(), out.diagnostics.history.len() + 1);
    }

    #[test]
    fn symmetric_mode_keeps_pairs_equal() {
        let inst = synthetic_instance::<f64>(15, 2, 60, 1.0, NoiseConfig::NONE, 8).unwrap();
        let mut cfg = SolverConfig::new(0.01, Sparsity::new(2.0).unwrap());
        cfg.symmetric = true;
        let out = solve(&inst, &cfg).unwrap();
        assert!(out.state.factors.pairs().iter().all(|q| q.u == q.v));
    }
}
