use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Sparsity};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<S> {
    pub lambda: S,
    pub s: Sparsity<S>,
    /// Restrict to `u_k = v_k` (PSD iterates, symmetric gauge).
    pub symmetric: bool,
    pub max_rank: usize,
    /// Relative objective decrease below which an inner solve (and an
    /// alternation round) counts as converged.
    pub inner_tol: S,
    pub stationarity_tol: S,
    pub max_inner_iters: usize,
    /// Cap on certificate checks / atom additions.
    pub max_outer_iters: usize,
    /// Cap on U/V alternation rounds between two certificate checks.
    pub max_alternations: usize,
    pub epsilon0: S,
    pub backtrack_factor: S,
}

impl<S: Scalar> SolverConfig<S> {
    pub fn new(lambda: S, s: Sparsity<S>) -> Self {
        SolverConfig {
            lambda,
            s,
            symmetric: false,
            max_rank: 20,
            inner_tol: S::lit(1e-7),
            stationarity_tol: S::lit(1e-6),
            max_inner_iters: 500,
            max_outer_iters: 100,
            max_alternations: 500,
            epsilon0: S::one(),
            backtrack_factor: S::lit(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !(self.lambda > S::zero()) || !self.lambda.is_finite() {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if self.max_rank < 1 {
            return bad("max_rank must be >= 1".into());
        }
        if !(self.backtrack_factor > S::zero() && self.backtrack_factor < S::one()) {
            return bad(format!("backtrack_factor must lie in (0, 1), got {}", self.backtrack_factor));
        }
        if !(self.inner_tol > S::zero()) || !(self.stationarity_tol > S::zero()) {
            return bad("tolerances must be positive".into());
        }
        if !(self.epsilon0 > S::zero()) {
            return bad("epsilon0 must be positive".into());
        }
        if self.max_inner_iters == 0 || self.max_alternations == 0 {
            return bad("iteration caps must be positive".into());
        }
        Ok(())
    }

    /// Rejection threshold `(1 + 1/√s)² λ` of the 1-sparse certificate.
    pub fn certificate_threshold(&self) -> S {
        self.s.unit_atom_gauge() * self.lambda
    }
}

/// Serializable solver knobs (everything except `lambda` and `s`, which the
/// experiment supplies). Missing keys take the defaults of [`SolverConfig::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub symmetric: bool,
    pub max_rank: usize,
    pub inner_tol: f64,
    pub stationarity_tol: f64,
    pub max_inner_iters: usize,
    pub max_outer_iters: usize,
    pub max_alternations: usize,
    pub epsilon0: f64,
    pub backtrack_factor: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let c = SolverConfig::<f64>::new(1.0, Sparsity::new(1.0).expect("valid"));
        SolverSettings {
            symmetric: c.symmetric,
            max_rank: c.max_rank,
            inner_tol: c.inner_tol,
            stationarity_tol: c.stationarity_tol,
            max_inner_iters: c.max_inner_iters,
            max_outer_iters: c.max_outer_iters,
            max_alternations: c.max_alternations,
            epsilon0: c.epsilon0,
            backtrack_factor: c.backtrack_factor,
        }
    }
}

impl SolverSettings {
    pub fn to_config<S: Scalar>(&self, lambda: S, s: Sparsity<S>) -> Result<SolverConfig<S>> {
        let cfg = SolverConfig {
            lambda,
            s,
            symmetric: self.symmetric,
            max_rank: self.max_rank,
            inner_tol: S::lit(self.inner_tol),
            stationarity_tol: S::lit(self.stationarity_tol),
            max_inner_iters: self.max_inner_iters,
            max_outer_iters: self.max_outer_iters,
            max_alternations: self.max_alternations,
            epsilon0: S::lit(self.epsilon0),
            backtrack_factor: S::lit(self.backtrack_factor),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
