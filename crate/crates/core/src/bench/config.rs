use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{NoiseConfig, NoiseKind};
use crate::solver::SolverSettings;

/// How `λ` is chosen for an `(s, n)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaRule {
    Fixed(f64),
    /// `c · σ_eff · √(s log(e p / s) / n)`, with `σ_eff = σ` for Gaussian
    /// noise and `‖β*‖₂` for Poisson noise.
    Scaled(f64),
    /// `c · ‖y‖∞`, for noiseless runs where the scaled rule degenerates.
    RelativeToMax(f64),
}

impl LambdaRule {
    pub fn validate(&self, noise: &NoiseConfig) -> Result<()> {
        let c = match *self {
            LambdaRule::Fixed(c) | LambdaRule::Scaled(c) | LambdaRule::RelativeToMax(c) => c,
        };
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Config(format!("lambda rule constant must be positive, got {c}")));
        }
        if matches!(self, LambdaRule::Scaled(_)) && noise.model == NoiseKind::None {
            return Err(Error::Config("scaled lambda rule needs a noise model".into()));
        }
        Ok(())
    }

    pub fn lambda(&self, p: usize, s: usize, n: usize, noise: &NoiseConfig, beta_norm: f64, y_max: f64) -> f64 {
        match *self {
            LambdaRule::Fixed(v) => v,
            LambdaRule::Scaled(c) => {
                let sigma = match noise.model {
                    NoiseKind::None => 0.0,
                    NoiseKind::Gaussian => noise.sigma,
                    NoiseKind::Poisson => beta_norm,
                };
                c * sigma * super::fit::scaling_profile(s, p) / (n as f64).sqrt()
            }
            LambdaRule::RelativeToMax(c) => c * y_max,
        }
    }
}

fn default_quantile() -> f64 {
    0.8
}

fn default_success() -> f64 {
    1e-2
}

fn default_beta_norm() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub p: usize,
    pub s_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub noise: NoiseConfig,
    #[serde(default = "default_beta_norm")]
    pub beta_norm: f64,
    pub lambda_rule: LambdaRule,
    #[serde(default = "default_quantile")]
    pub quantile: f64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub solver: SolverSettings,
    /// Relative error `‖β̂ ∓ β*‖/‖β*‖` counted as a success.
    #[serde(default = "default_success")]
    pub success_threshold: f64,
    /// Wall-clock times make record files differ between runs; off by default.
    #[serde(default)]
    pub record_runtime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub p: usize,
    pub n: usize,
    pub s_values: Vec<usize>,
    pub trials: usize,
    pub noise: NoiseConfig,
    #[serde(default = "default_beta_norm")]
    pub beta_norm: f64,
    pub lambda_rule: LambdaRule,
    #[serde(default = "default_quantile")]
    pub quantile: f64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub solver: SolverSettings,
    #[serde(default = "default_success")]
    pub success_threshold: f64,
    #[serde(default)]
    pub record_runtime: bool,
}

/// Single synthetic solve for the `solve` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRunConfig {
    pub p: usize,
    pub s: usize,
    pub n: usize,
    pub noise: NoiseConfig,
    #[serde(default = "default_beta_norm")]
    pub beta_norm: f64,
    pub lambda_rule: LambdaRule,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpcaRunConfig {
    pub p: usize,
    pub s: usize,
    pub n: usize,
    pub sigma1: f64,
    pub sigma2: f64,
    pub lambda: f64,
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
}

pub(crate) fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn check_common(
    p: usize,
    s_values: &[usize],
    trials: usize,
    noise: &NoiseConfig,
    beta_norm: f64,
    rule: &LambdaRule,
    quantile: f64,
    success: f64,
) -> Result<()> {
    let bad = |m: String| Err(Error::Config(m));
    if p == 0 {
        return bad("p must be positive".into());
    }
    if trials == 0 {
        return bad("trials must be >= 1".into());
    }
    if s_values.is_empty() || s_values.iter().any(|&s| s == 0 || s > p) {
        return bad(format!("s_values must be nonempty with 1 <= s <= p = {p}"));
    }
    if !(quantile > 0.0 && quantile < 1.0) {
        return bad(format!("quantile must lie in (0, 1), got {quantile}"));
    }
    if !(beta_norm > 0.0) || !beta_norm.is_finite() {
        return bad(format!("beta_norm must be positive, got {beta_norm}"));
    }
    if !(success > 0.0) {
        return bad("success_threshold must be positive".into());
    }
    noise.validate().map_err(|e| Error::Config(e.to_string()))?;
    rule.validate(noise)
}

impl GridConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg: Self = load_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_common(
            self.p,
            &self.s_values,
            self.trials,
            &self.noise,
            self.beta_norm,
            &self.lambda_rule,
            self.quantile,
            self.success_threshold,
        )?;
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::Config("n_values must be nonempty and positive".into()));
        }
        Ok(())
    }
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg: Self = load_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_common(
            self.p,
            &self.s_values,
            self.trials,
            &self.noise,
            self.beta_norm,
            &self.lambda_rule,
            self.quantile,
            self.success_threshold,
        )?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        Ok(())
    }

    /// The equivalent single-column grid.
    pub fn as_grid(&self) -> GridConfig {
        GridConfig {
            p: self.p,
            s_values: self.s_values.clone(),
            n_values: vec![self.n],
            trials: self.trials,
            noise: self.noise,
            beta_norm: self.beta_norm,
            lambda_rule: self.lambda_rule,
            quantile: self.quantile,
            base_seed: self.base_seed,
            solver: self.solver,
            success_threshold: self.success_threshold,
            record_runtime: self.record_runtime,
        }
    }
}

impl SolveRunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg: Self = load_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.p, &[self.s], 1, &self.noise, self.beta_norm, &self.lambda_rule, 0.5, 1.0)?;
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        Ok(())
    }
}

impl SpcaRunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let cfg: Self = load_json(path)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 || self.s > self.p || self.n < 2 || self.trials == 0 {
            return Err(Error::Config("need 1 <= s <= p, n >= 2, trials >= 1".into()));
        }
        if !(self.sigma2 > 0.0 && self.sigma1 > self.sigma2) {
            return Err(Error::Config("need sigma1 > sigma2 > 0".into()));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::Config("lambda must be >= 0".into()));
        }
        Ok(())
    }
}
