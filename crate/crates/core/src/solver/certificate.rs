use ndarray::{s, Array1, ArrayView2};

use super::config::SolverConfig;
use super::objective::residuals;
use crate::error::{Error, Result};
use crate::factored::{FactorPair, FactoredMatrix};
use crate::model::ProblemInstance;
use crate::scalar::Scalar;

/// Largest entry of `Z = (1/n) Σ_t r_t x_t x_tᵀ` and where it sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualCertificate<S> {
    pub max_entry: S,
    /// Row-major position, lexicographically smallest among ties.
    pub location: (usize, usize),
    /// `(1 + 1/√s)² λ`.
    pub threshold: S,
}

impl<S: Scalar> DualCertificate<S> {
    /// True when no 1-sparse atom gives a descent direction.
    pub fn holds(&self) -> bool {
        self.max_entry <= self.threshold
    }
}

/// Entries of `Z` held in memory at once while scanning.
const BLOCK_ENTRIES: usize = 1 << 22;

/// Maximal entry of `Z = (1/n) Aᵀ diag(r) A`, computed in column blocks.
/// With `diagonal_only` just `Z_ii` is scanned.
pub fn max_certificate_entry<S: Scalar>(
    design: ArrayView2<S>,
    r: &Array1<S>,
    diagonal_only: bool,
) -> (S, (usize, usize)) {
    let (n, p) = design.dim();
    let inv_n = S::one() / S::from_usize(n).expect("n fits scalar");
    let mut best = S::neg_infinity();
    let mut loc = (0, 0);
    let mut consider = |v: S, at: (usize, usize)| {
        if v > best || (v == best && at < loc) {
            best = v;
            loc = at;
        }
    };
    if diagonal_only {
        for j in 0..p {
            let col = design.column(j);
            let z: S = col.iter().zip(r).map(|(x, ri)| *ri * *x * *x).sum::<S>() * inv_n;
            consider(z, (j, j));
        }
        return (best, loc);
    }
    let weighted = {
        let mut w = design.to_owned();
        for (mut row, &ri) in w.rows_mut().into_iter().zip(r) {
            row.mapv_inplace(|x| x * ri * inv_n);
        }
        w
    };
    let block = (BLOCK_ENTRIES / p.max(1)).clamp(1, p.max(1));
    let mut start = 0;
    while start < p {
        let end = (start + block).min(p);
        let z = design.t().dot(&weighted.slice(s![.., start..end]));
        for i in 0..p {
            for (jj, v) in z.row(i).iter().enumerate() {
                consider(*v, (i, start + jj));
            }
        }
        start = end;
    }
    (best, loc)
}

/// The 1-sparse dual certificate at `F`. In symmetric mode only diagonal
/// atoms `e_i e_iᵀ` are admissible, so only the diagonal is scanned.
pub fn certificate_1sparse<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<DualCertificate<S>> {
    let r = residuals(inst, f)?;
    let (max_entry, location) = max_certificate_entry(inst.design.view(), &r, cfg.symmetric);
    Ok(DualCertificate {
        max_entry,
        location,
        threshold: cfg.certificate_threshold(),
    })
}

#[derive(Debug, Clone)]
pub struct AtomAddition<S> {
    pub factors: FactoredMatrix<S>,
    pub epsilon: S,
    /// Exact objective change of the accepted atom (negative).
    pub objective_change: S,
}

const MAX_HALVINGS: usize = 60;

/// Appends `(ε e_j, ε e_i)` for the certificate location `(i, j)`, with `ε`
/// backtracked from `epsilon0` until the objective strictly decreases.
///
/// The change is evaluated in closed form,
/// `Δ(ε) = ε²(λ(1+1/√s)² − Z_ij) + ε⁴ (1/2n) Σ_t (x_t[i] x_t[j])²`,
/// so it stays resolvable for tiny `ε`.
pub fn add_atom<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
    location: (usize, usize),
) -> Result<AtomAddition<S>> {
    let (i, j) = location;
    let p = inst.p();
    if i >= p || j >= p {
        return Err(Error::Parameter(format!("atom location {location:?} outside p = {p}")));
    }
    if f.is_symmetric() && i != j {
        return Err(Error::Parameter(
            "symmetric mode only admits diagonal atoms".into(),
        ));
    }
    let r = residuals(inst, f)?;
    let n = S::from_usize(inst.n()).expect("n fits scalar");
    let ci = inst.design.column(i);
    let cj = inst.design.column(j);
    let z_ij = ci.iter().zip(cj).zip(&r).map(|((a, b), t)| *a * *b * *t).sum::<S>() / n;
    let quartic = ci.iter().zip(cj).map(|(a, b)| (*a * *b).powi(2)).sum::<S>() / (S::lit(2.0) * n);
    let linear = cfg.certificate_threshold() - z_ij;

    let mut eps = cfg.epsilon0;
    for _ in 0..=MAX_HALVINGS {
        let e2 = eps * eps;
        let change = e2 * linear + e2 * e2 * quartic;
        if change < S::zero() {
            let mut u = Array1::zeros(p);
            let mut v = Array1::zeros(p);
            u[j] = eps;
            v[i] = eps;
            let mut out = f.clone();
            out.push(FactorPair { u, v })?;
            return Ok(AtomAddition {
                factors: out,
                epsilon: eps,
                objective_change: change,
            });
        }
        eps = eps * cfg.backtrack_factor;
    }
    Err(Error::CertificateInconsistency(format!(
        "no decreasing step for atom at {location:?}: Z = {z_ij}, threshold = {}",
        cfg.certificate_threshold()
    )))
}
