//! Experimental sparse PCA on the trace ball.
//!
//! Minimises `−⟨Σ̂, P⟩ + λ Σ_k g(u_k)²` over `P = Σ u_k u_kᵀ` with
//! `Σ ‖u_k‖² ≤ 1`, by proximal gradient steps on the stacked factors, a global
//! rescale back onto the trace ball, and greedy diagonal atoms `e_i e_iᵀ`.
//! The heuristic is known to be weaker here than for phase retrieval; results
//! are flagged experimental.

use std::io::Write;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand_distr::{Distribution, StandardNormal};

use crate::atomic_norm::{factor_gauge, prox_gauge_squared};
use crate::error::{Error, Result};
use crate::factored::{FactorPair, FactoredMatrix};
use crate::linalg::{hs_inner, norm2, power_iteration};
use crate::model::generate_truth;
use crate::rng;
use crate::scalar::{Scalar, Sparsity};

/// Slack on the trace constraint.
pub const FEASIBILITY_SLACK: f64 = 1e-10;

/// `x ~ N(μ, σ₁ v₁v₁ᵀ + σ₂ (I − v₁v₁ᵀ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikedModel<S> {
    pub p: usize,
    pub s: usize,
    pub n: usize,
    pub sigma1: S,
    pub sigma2: S,
    pub v1: Array1<S>,
    pub mu: Array1<S>,
}

impl<S: Scalar> SpikedModel<S> {
    pub fn new(n: usize, sigma1: S, sigma2: S, v1: Array1<S>, mu: Array1<S>) -> Result<Self> {
        let p = v1.len();
        if mu.len() != p {
            return Err(Error::shape(p, mu.len()));
        }
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        if !(sigma2 > S::zero() && sigma1 > sigma2) {
            return Err(Error::Parameter(format!(
                "need sigma1 > sigma2 > 0, got {sigma1}, {sigma2}"
            )));
        }
        if (norm2(v1.view()) - S::one()).abs() > S::lit(1e-10) {
            return Err(Error::Parameter("v1 must have unit norm".into()));
        }
        let s = v1.iter().filter(|x| **x != S::zero()).count();
        Ok(SpikedModel {
            p,
            s,
            n,
            sigma1,
            sigma2,
            v1,
            mu,
        })
    }

    /// Centred model with a random `s`-sparse unit spike.
    pub fn random(p: usize, s: usize, n: usize, sigma1: S, sigma2: S, seed: u64) -> Result<Self> {
        let v1 = generate_truth(p, s, S::one(), seed)?.beta_star;
        Self::new(n, sigma1, sigma2, v1, Array1::zeros(p))
    }

    pub fn covariance(&self) -> Array2<S> {
        let vv = crate::factored::outer(self.v1.view(), self.v1.view());
        let eye = Array2::<S>::eye(self.p);
        (&eye - &vv) * self.sigma2 + vv * self.sigma1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate<S> {
    pub sigma_hat: Array2<S>,
    pub n: usize,
}

/// `(1/n) Σ (x_i − x̄)(x_i − x̄)ᵀ`, exactly symmetric.
pub fn empirical_covariance<S: Scalar>(samples: ArrayView2<S>) -> Result<CovarianceEstimate<S>> {
    let n = samples.nrows();
    if n < 2 {
        return Err(Error::Parameter(format!("need at least two samples, got {n}")));
    }
    let mean = samples.mean_axis(Axis(0)).expect("n >= 2");
    let centred = &samples - &mean;
    let mut c = centred.t().dot(&centred) / S::from_usize(n).expect("n fits scalar");
    let p = c.nrows();
    for i in 0..p {
        for j in (i + 1)..p {
            let m = S::lit(0.5) * (c[[i, j]] + c[[j, i]]);
            c[[i, j]] = m;
            c[[j, i]] = m;
        }
    }
    Ok(CovarianceEstimate { sigma_hat: c, n })
}

/// `n × p` samples from the spiked model, one row per sample.
pub fn sample_spiked<S: Scalar>(model: &SpikedModel<S>, seed: u64) -> Array2<S> {
    let mut rng = rng::from_seed(seed);
    let (a, b) = (model.sigma1.sqrt(), model.sigma2.sqrt());
    let mut out = Array2::zeros((model.n, model.p));
    for mut row in out.rows_mut() {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z: Array1<S> = (0..model.p)
            .map(|_| S::lit(StandardNormal.sample(&mut rng)))
            .collect();
        let along = model.v1.dot(&z);
        let perp = &z - &(&model.v1 * along);
        row.assign(&(&model.mu + &(&model.v1 * (a * S::lit(z1))) + &(perp * b)));
    }
    out
}

fn trace_of<S: Scalar>(f: &FactoredMatrix<S>) -> S {
    f.pairs().iter().map(|q| q.u.dot(&q.u)).sum()
}

fn check_symmetric_input<S: Scalar>(f: &FactoredMatrix<S>, sigma_hat: &Array2<S>) -> Result<()> {
    if !f.is_symmetric() {
        return Err(Error::Parameter("sparse PCA needs a symmetric factorization".into()));
    }
    if sigma_hat.nrows() != f.dim() || sigma_hat.ncols() != f.dim() {
        return Err(Error::shape(f.dim(), sigma_hat.nrows()));
    }
    Ok(())
}

/// `−⟨Σ̂, Σ u_k u_kᵀ⟩ + λ Σ g(u_k)²`; errors if the trace exceeds one.
pub fn spca_objective<S: Scalar>(
    f: &FactoredMatrix<S>,
    sigma_hat: &Array2<S>,
    lambda: S,
    s: &Sparsity<S>,
) -> Result<S> {
    check_symmetric_input(f, sigma_hat)?;
    let tr = trace_of(f);
    if tr > S::one() + S::lit(FEASIBILITY_SLACK) {
        return Err(Error::Feasibility(format!("trace {tr} exceeds 1")));
    }
    Ok(unchecked_objective(f.pairs(), sigma_hat, lambda, s))
}

fn unchecked_objective<S: Scalar>(pairs: &[FactorPair<S>], sigma_hat: &Array2<S>, lambda: S, s: &Sparsity<S>) -> S {
    pairs
        .iter()
        .map(|q| {
            let g = factor_gauge(q.u.view(), s);
            lambda * g * g - q.u.dot(&sigma_hat.dot(&q.u))
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpcaConfig<S> {
    pub lambda: S,
    pub s: Sparsity<S>,
    pub max_rank: usize,
    /// Proximal-gradient steps per block.
    pub max_iters: usize,
    /// Relative objective decrease that ends a block.
    pub tol: S,
    /// Cap on atom additions.
    pub max_outer_iters: usize,
    pub epsilon0: S,
    pub backtrack_factor: S,
}

impl<S: Scalar> SpcaConfig<S> {
    pub fn new(lambda: S, s: Sparsity<S>) -> Self {
        SpcaConfig {
            lambda,
            s,
            max_rank: 10,
            max_iters: 500,
            tol: S::lit(1e-10),
            max_outer_iters: 20,
            epsilon0: S::one(),
            backtrack_factor: S::lit(0.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= S::zero()) || !self.lambda.is_finite() {
            return Err(Error::Parameter(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.max_rank == 0 || self.max_iters == 0 {
            return Err(Error::Parameter("rank and iteration caps must be positive".into()));
        }
        if !(self.backtrack_factor > S::zero() && self.backtrack_factor < S::one()) {
            return Err(Error::Parameter("backtrack_factor must lie in (0, 1)".into()));
        }
        if !(self.epsilon0 > S::zero() && self.epsilon0 <= S::one()) {
            return Err(Error::Parameter("epsilon0 must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpcaHistoryEntry<S> {
    pub iter: usize,
    pub objective: S,
    pub rank: usize,
    /// Largest λ-scaled stationarity violation over the diagonal directions
    /// (clipped at zero).
    pub stationarity_gap: S,
    pub cert_max: Option<S>,
    /// `Σ ‖u_k‖²`.
    pub feasibility: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpcaTermination {
    /// No diagonal atom decreases the objective.
    Stationary,
    RankCap,
    MaxOuter,
    /// `Σ̂ = 0`.
    ZeroCovariance,
}

#[derive(Debug, Clone)]
pub struct SpcaDiagnostics<S> {
    pub history: Vec<SpcaHistoryEntry<S>>,
    pub status: SpcaTermination,
    /// Always true: the sparse PCA heuristic carries no recovery guarantee.
    pub experimental: bool,
}

impl<S: Scalar> SpcaDiagnostics<S> {
    pub fn max_increase(&self) -> S {
        self.history
            .windows(2)
            .map(|w| w[1].objective - w[0].objective)
            .fold(S::neg_infinity(), S::max)
    }

    pub fn max_trace(&self) -> S {
        self.history.iter().map(|h| h.feasibility).fold(S::zero(), S::max)
    }
}

#[derive(Debug, Clone)]
pub struct SpcaOutput<S> {
    pub factors: FactoredMatrix<S>,
    pub objective: S,
    pub diagnostics: SpcaDiagnostics<S>,
}

impl<S: Scalar> SpcaOutput<S> {
    /// Unit direction of the factor with the largest norm.
    pub fn leading_direction(&self) -> Option<Array1<S>> {
        self.factors
            .pairs()
            .iter()
            .map(|q| (norm2(q.u.view()), &q.u))
            .filter(|(n, _)| *n > S::zero())
            .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(n, u)| u / n)
    }
}

/// Evaluates the stationarity inequality
/// `⟨Σ̂u,u⟩ + (λ Σ g(u_k)² − ⟨Σ̂,P⟩)‖u‖² ≤ rhs(u)` for `u = e_i` and
/// `u = e_i ± e_j` over the listed pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpcaStationarityReport<S> {
    /// Largest `lhs − θ_s(u,u)` (positive means violated).
    pub literal_violation: S,
    pub literal_direction: Array1<S>,
    /// Largest `lhs − λθ_s(u,u)`; positive exactly when adding `u` (and
    /// shrinking the rest onto the trace sphere) is a first-order descent.
    pub scaled_violation: S,
    pub scaled_direction: Array1<S>,
    pub directions_checked: usize,
}

impl<S: Scalar> SpcaStationarityReport<S> {
    pub fn literal_holds(&self) -> bool {
        self.literal_violation <= S::zero()
    }

    pub fn scaled_holds(&self) -> bool {
        self.scaled_violation <= S::zero()
    }
}

pub fn spca_stationarity_check<S: Scalar>(
    f: &FactoredMatrix<S>,
    sigma_hat: &Array2<S>,
    lambda: S,
    s: &Sparsity<S>,
    pairs: &[(usize, usize)],
) -> Result<SpcaStationarityReport<S>> {
    check_symmetric_input(f, sigma_hat)?;
    let p = f.dim();
    let explained = hs_inner(sigma_hat, &f.to_dense());
    let charge: S = f
        .pairs()
        .iter()
        .map(|q| {
            let g = factor_gauge(q.u.view(), s);
            g * g
        })
        .sum();
    let shift = lambda * charge - explained;

    let mut directions: Vec<Array1<S>> = (0..p)
        .map(|i| {
            let mut e = Array1::zeros(p);
            e[i] = S::one();
            e
        })
        .collect();
    for &(i, j) in pairs {
        if i >= p || j >= p || i == j {
            return Err(Error::Parameter(format!("invalid direction pair ({i}, {j}) for p = {p}")));
        }
        for sign in [S::one(), -S::one()] {
            let mut e = Array1::zeros(p);
            e[i] = S::one();
            e[j] = sign;
            directions.push(e);
        }
    }

    let mut literal = (S::neg_infinity(), Array1::zeros(p));
    let mut scaled = (S::neg_infinity(), Array1::zeros(p));
    for u in &directions {
        let g = factor_gauge(u.view(), s);
        let lhs = u.dot(&sigma_hat.dot(u)) + shift * u.dot(u);
        let vl = lhs - g * g;
        let vs = lhs - lambda * g * g;
        if vl > literal.0 {
            literal = (vl, u.clone());
        }
        if vs > scaled.0 {
            scaled = (vs, u.clone());
        }
    }
    Ok(SpcaStationarityReport {
        literal_violation: literal.0,
        literal_direction: literal.1,
        scaled_violation: scaled.0,
        scaled_direction: scaled.1,
        directions_checked: directions.len(),
    })
}

/// Global rescale onto `Σ ‖u_k‖² ≤ 1`.
fn project_trace<S: Scalar>(u: &mut Array2<S>) {
    let tr: S = u.iter().map(|x| *x * *x).sum();
    if tr > S::one() {
        let c = S::one() / tr.sqrt();
        u.mapv_inplace(|x| x * c);
    }
}

fn stack_to_pairs<S: Scalar>(u: &Array2<S>) -> Vec<FactorPair<S>> {
    u.columns()
        .into_iter()
        .filter(|c| c.iter().any(|x| *x != S::zero()))
        .map(|c| FactorPair::symmetric(c.to_owned()))
        .collect()
}

struct Block<'a, S> {
    sigma_hat: &'a Array2<S>,
    cfg: &'a SpcaConfig<S>,
}

impl<S: Scalar> Block<'_, S> {
    fn value(&self, u: &Array2<S>) -> S {
        u.columns()
            .into_iter()
            .map(|c| {
                let g = factor_gauge(c, &self.cfg.s);
                self.cfg.lambda * g * g - c.dot(&self.sigma_hat.dot(&c))
            })
            .sum()
    }

    fn step(&self, u: &Array2<S>, t: S) -> Result<Array2<S>> {
        // gradient of −tr(UᵀΣ̂U) is −2Σ̂U
        let z = u + &(self.sigma_hat.dot(u) * (S::lit(2.0) * t));
        let mut out = Array2::zeros(u.raw_dim());
        for (mut dst, col) in out.columns_mut().into_iter().zip(z.columns()) {
            dst.assign(&prox_gauge_squared(col, t * self.cfg.lambda, &self.cfg.s)?);
        }
        project_trace(&mut out);
        Ok(out)
    }

    /// Accept-if-decrease proximal gradient with an adaptive step.
    fn minimise(&self, mut u: Array2<S>, mut obj: S, step0: S) -> Result<(Array2<S>, S)> {
        let mut t = step0;
        let min_step = S::lit(1e-12);
        for _ in 0..self.cfg.max_iters {
            let cand = self.step(&u, t)?;
            let val = self.value(&cand);
            if !val.is_finite() {
                return Err(Error::Numerical {
                    message: "sparse PCA objective became non-finite".into(),
                    diagnostics: format!("step {t}"),
                });
            }
            if val < obj {
                let rel = (obj - val) / obj.abs().max(S::one());
                u = cand;
                obj = val;
                t = t * S::lit(2.0);
                if rel < self.cfg.tol {
                    break;
                }
            } else {
                t = t * S::lit(0.5);
                if t < min_step {
                    break;
                }
            }
        }
        Ok((u, obj))
    }
}

/// Runs the experimental sparse PCA heuristic.
pub fn spca_solve<S: Scalar>(sigma_hat: &Array2<S>, cfg: &SpcaConfig<S>) -> Result<SpcaOutput<S>> {
    cfg.validate()?;
    let p = sigma_hat.nrows();
    if sigma_hat.ncols() != p {
        return Err(Error::shape(p, sigma_hat.ncols()));
    }
    let asym = sigma_hat
        .indexed_iter()
        .map(|((i, j), x)| (*x - sigma_hat[[j, i]]).abs())
        .fold(S::zero(), S::max);
    let scale = sigma_hat.iter().map(|x| x.abs()).fold(S::zero(), S::max);
    if asym > S::lit(1e-12) * scale.max(S::one()) {
        return Err(Error::Parameter("covariance must be symmetric".into()));
    }

    let mut history = Vec::new();
    let mut record = |f: &FactoredMatrix<S>, obj: S, cert: Option<S>, gap: S| -> Result<()> {
        let feasibility = trace_of(f);
        if let Some(prev) = history.last().map(|h: &SpcaHistoryEntry<S>| h.objective) {
            if obj > prev + S::lit(crate::solver::MONOTONE_SLACK) {
                return Err(Error::Numerical {
                    message: "sparse PCA objective increased".into(),
                    diagnostics: format!("{prev} -> {obj}"),
                });
            }
        }
        if feasibility > S::one() + S::lit(FEASIBILITY_SLACK) {
            return Err(Error::Feasibility(format!("trace {feasibility} exceeds 1")));
        }
        history.push(SpcaHistoryEntry {
            iter: history.len(),
            objective: obj,
            rank: f.rank(),
            stationarity_gap: gap,
            cert_max: cert,
            feasibility,
        });
        Ok(())
    };

    let empty = FactoredMatrix::empty(p, true);
    if scale == S::zero() {
        record(&empty, S::zero(), None, S::zero())?;
        return Ok(SpcaOutput {
            factors: empty,
            objective: S::zero(),
            diagnostics: SpcaDiagnostics {
                history,
                status: SpcaTermination::ZeroCovariance,
                experimental: true,
            },
        });
    }

    // Leading eigenvector on the top-⌈s⌉ diagonal support, kept only if it
    // beats the empty factorization.
    let k = cfg.s.value().ceil().to_usize().unwrap_or(p).clamp(1, p);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        sigma_hat[[b, b]]
            .partial_cmp(&sigma_hat[[a, a]])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut support = order[..k].to_vec();
    support.sort_unstable();
    let sub = sigma_hat.select(Axis(0), &support).select(Axis(1), &support);
    let (_, dir) = power_iteration(|v| sub.dot(v), Array1::ones(k), 100, S::lit(1e-8));
    let mut u0 = Array1::zeros(p);
    for (&j, &d) in support.iter().zip(&dir) {
        u0[j] = d;
    }
    let mut f = FactoredMatrix::empty(p, true);
    let init_pairs = vec![FactorPair::symmetric(u0)];
    if unchecked_objective(&init_pairs, sigma_hat, cfg.lambda, &cfg.s) < S::zero() {
        f = FactoredMatrix::from_pairs(p, true, init_pairs)?;
    }
    let mut obj = spca_objective(&f, sigma_hat, cfg.lambda, &cfg.s)?;
    record(&f, obj, None, S::zero())?;

    let step0 = S::one() / (S::lit(2.0) * scale * S::from_usize(p).expect("p fits scalar")).max(S::min_positive_value());
    let block = Block { sigma_hat, cfg };
    let mut status = SpcaTermination::MaxOuter;
    for _ in 0..cfg.max_outer_iters {
        if !f.is_empty() {
            let (u, val) = block.minimise(f.u_stack(), obj, step0)?;
            if val < obj {
                f = FactoredMatrix::from_pairs(p, true, stack_to_pairs(&u))?;
                obj = spca_objective(&f, sigma_hat, cfg.lambda, &cfg.s)?;
            }
        }
        let report = spca_stationarity_check(&f, sigma_hat, cfg.lambda, &cfg.s, &[])?;
        let gap = report.scaled_violation.max(S::zero());
        record(&f, obj, Some(report.scaled_violation), gap)?;
        if report.scaled_holds() {
            status = SpcaTermination::Stationary;
            break;
        }
        if f.rank() >= cfg.max_rank {
            status = SpcaTermination::RankCap;
            break;
        }
        let i = report
            .scaled_direction
            .iter()
            .position(|x| *x != S::zero())
            .expect("diagonal direction");
        match add_diagonal_atom(&f, sigma_hat, cfg, i, obj)? {
            Some((g, val)) => {
                f = g;
                obj = val;
            }
            None => {
                status = SpcaTermination::Stationary;
                break;
            }
        }
    }
    Ok(SpcaOutput {
        factors: f,
        objective: obj,
        diagnostics: SpcaDiagnostics {
            history,
            status,
            experimental: true,
        },
    })
}

/// Appends `ε e_i` and rescales onto the trace ball, backtracking `ε` until
/// the objective strictly decreases. `None` when 60 reductions fail.
fn add_diagonal_atom<S: Scalar>(
    f: &FactoredMatrix<S>,
    sigma_hat: &Array2<S>,
    cfg: &SpcaConfig<S>,
    i: usize,
    obj: S,
) -> Result<Option<(FactoredMatrix<S>, S)>> {
    let p = f.dim();
    let mut eps = cfg.epsilon0;
    for _ in 0..=60 {
        let mut e = Array1::zeros(p);
        e[i] = eps;
        let mut cols = f.u_stack();
        cols.push_column(e.view()).expect("column length p");
        project_trace(&mut cols);
        let g = FactoredMatrix::from_pairs(p, true, stack_to_pairs(&cols))?;
        let val = spca_objective(&g, sigma_hat, cfg.lambda, &cfg.s)?;
        if val < obj {
            return Ok(Some((g, val)));
        }
        eps = eps * cfg.backtrack_factor;
    }
    Ok(None)
}

/// Solver diagnostics CSV plus a trailing `feasibility` column.
pub fn write_spca_diagnostics_csv<S: Scalar, W: Write>(diag: &SpcaDiagnostics<S>, mut w: W) -> Result<()> {
    writeln!(w, "iter,objective,rank,stationarity_gap,cert_max,feasibility")?;
    for h in &diag.history {
        let cert = h.cert_max.map(|c| format!("{:.16e}", c.to_f64_lossy())).unwrap_or_default();
        writeln!(
            w,
            "{},{:.16e},{},{:.16e},{},{:.16e}",
            h.iter,
            h.objective.to_f64_lossy(),
            h.rank,
            h.stationarity_gap.to_f64_lossy(),
            cert,
            h.feasibility.to_f64_lossy()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn sp(s: f64) -> Sparsity<f64> {
        Sparsity::new(s).unwrap()
    }

    #[test]
    fn covariance_examples() {
        let same = array![[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]];
        assert!(empirical_covariance(same.view()).unwrap().sigma_hat.iter().all(|x| *x == 0.0));
        let pair = array![[1.0f64, -2.0], [-1.0, 2.0]];
        let c = empirical_covariance(pair.view()).unwrap().sigma_hat;
        assert_eq!(c, array![[1.0, -2.0], [-2.0, 4.0]]);
        assert!(empirical_covariance(array![[1.0f64, 2.0]].view()).is_err());
    }

    #[test]
    fn objective_examples() {
        let v = array![0.6f64, 0.8, 0.0];
        let sigma = crate::factored::outer(v.view(), v.view()) * 3.0;
        assert_eq!(spca_objective(&FactoredMatrix::empty(3, true), &sigma, 0.1, &sp(2.0)).unwrap(), 0.0);
        let f = FactoredMatrix::from_pairs(3, true, vec![FactorPair::symmetric(v.clone())]).unwrap();
        let g = factor_gauge(v.view(), &sp(2.0));
        let got = spca_objective(&f, &sigma, 0.1, &sp(2.0)).unwrap();
        assert!((got - (-3.0 + 0.1 * g * g)).abs() < 1e-12);
        let big = FactoredMatrix::from_pairs(3, true, vec![FactorPair::symmetric(v * 2.0)]).unwrap();
        assert!(matches!(spca_objective(&big, &sigma, 0.1, &sp(2.0)), Err(Error::Feasibility(_))));
    }

    #[test]
    fn zero_covariance_gives_zero() {
        let out = spca_solve(&Array2::<f64>::zeros((4, 4)), &SpcaConfig::new(0.1, sp(2.0))).unwrap();
        assert!(out.factors.is_empty());
        assert_eq!(out.objective, 0.0);
        let rep = spca_stationarity_check(&out.factors, &Array2::zeros((4, 4)), 0.1, &sp(2.0), &[(0, 1)]).unwrap();
        assert!(rep.literal_holds() && rep.scaled_holds());
        assert_eq!(rep.directions_checked, 6);
    }

    #[test]
    fn sampler_is_deterministic() {
        let m = SpikedModel::<f64>::random(10, 2, 30, 2.0, 1.0, 3).unwrap();
        assert_eq!(sample_spiked(&m, 5), sample_spiked(&m, 5));
        assert_eq!(m.s, 2);
    }
}
