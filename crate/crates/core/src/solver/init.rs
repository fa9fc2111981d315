use ndarray::{Array1, Axis};

use super::config::SolverConfig;
use crate::error::{Error, Result};
use crate::factored::{FactorPair, FactoredMatrix};
use crate::linalg::power_iteration;
use crate::model::ProblemInstance;
use crate::scalar::Scalar;

const POWER_STEPS: usize = 100;
const POWER_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpectralInit<S> {
    /// One pair `(u₁, u₁)`.
    pub factors: FactoredMatrix<S>,
    /// Estimated support, ascending.
    pub support: Vec<usize>,
    /// Set when `y = 0` (or the spectrum carries no signal) and a canonical
    /// unit vector was returned instead.
    pub degenerate: bool,
}

/// Diagonal scores `(1/n) Σ_i y_i x_i[j]²`.
pub fn support_scores<S: Scalar>(inst: &ProblemInstance<S>) -> Array1<S> {
    let inv_n = S::one() / S::from_usize(inst.n()).expect("n fits scalar");
    let sq = inst.design.mapv(|x| x * x);
    sq.t().dot(&inst.observations) * inv_n
}

/// Spectral initialisation: top-⌈s⌉ score support, then the leading
/// eigenvector of `(1/n) Σ y_i x_i x_iᵀ` restricted to it, scaled so that
/// `mean ⟨x_i,u⟩²` equals `mean max(y_i, 0)`.
pub fn spectral_init<S: Scalar>(inst: &ProblemInstance<S>, cfg: &SolverConfig<S>) -> Result<SpectralInit<S>> {
    let (n, p) = (inst.n(), inst.p());
    if n == 0 {
        return Err(Error::Parameter("spectral init needs n >= 1".into()));
    }
    let scores = support_scores(inst);
    let k = (cfg.s.value().ceil().to_usize().unwrap_or(p)).clamp(1, p);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut support = order[..k].to_vec();
    support.sort_unstable();

    let canonical = |support: Vec<usize>| {
        let mut e = Array1::zeros(p);
        e[order[0]] = S::one();
        Ok(SpectralInit {
            factors: FactoredMatrix::from_pairs(p, cfg.symmetric, vec![FactorPair::symmetric(e)])?,
            support,
            degenerate: true,
        })
    };
    if inst.observations.iter().all(|y| *y == S::zero()) {
        return canonical(support);
    }

    let inv_n = S::one() / S::from_usize(n).expect("n fits scalar");
    let xs = inst.design.select(Axis(1), &support);
    let weighted = {
        let mut w = xs.clone();
        for (mut row, &y) in w.rows_mut().into_iter().zip(&inst.observations) {
            row.mapv_inplace(|x| x * y * inv_n);
        }
        w
    };
    let m = xs.t().dot(&weighted);
    let (_, dir) = power_iteration(|v| m.dot(v), Array1::ones(k), POWER_STEPS, S::lit(POWER_TOL));

    let mut u = Array1::zeros(p);
    for (&j, &d) in support.iter().zip(&dir) {
        u[j] = d;
    }
    let proj = inst.design.dot(&u);
    let energy = proj.dot(&proj) * inv_n;
    let target = inst.observations.iter().map(|y| y.max(S::zero())).sum::<S>() * inv_n;
    if !(energy > S::zero()) || !(target > S::zero()) {
        return canonical(support);
    }
    u *= (target / energy).sqrt();
    Ok(SpectralInit {
        factors: FactoredMatrix::from_pairs(p, cfg.symmetric, vec![FactorPair::symmetric(u)])?,
        support,
        degenerate: false,
    })
}
