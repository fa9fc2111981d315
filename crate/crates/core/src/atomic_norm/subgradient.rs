//! Subgradients of the mixed norm at `β βᵀ` for `s`-sparse `β`.
//!
//! A matrix `W` is a subgradient when `⟨Wβ, β⟩ = θ_s(β, β)` and
//! `⟨Wu, v⟩ ≤ θ_s(u, v)` for all `u, v`. The base element is
//! `W_β = w_β w_βᵀ` with `w_β = β/‖β‖₂ + sign(β)/√s`; the three families
//! below add a perturbation `W⊥` with `⟨W⊥β, β⟩ = 0`.

use ndarray::{Array1, Array2};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::gauge::factor_gauge;
use super::projection::{ModelSpaces, ModelSubspace};
use crate::error::{Error, Result};
use crate::factored::{outer, FactorPair};
use crate::linalg::{frobenius, norm2, norm_inf, operator_norm};
use crate::rng::{self, Rng};
use crate::scalar::{Scalar, Sparsity};

/// Sample count of the family-3 validity check.
pub const FAMILY3_SAMPLES: usize = 10_000;
/// Fixed seed of the family-3 validity check.
pub const FAMILY3_SEED: u64 = 0x5EED_F3;

/// `w_β = β/‖β‖₂ + sign(β)/√s`, with `sign(0) = 0`.
pub fn w_beta<S: Scalar>(beta: &Array1<S>, s: &Sparsity<S>) -> Result<Array1<S>> {
    let nb = norm2(beta.view());
    if nb == S::zero() {
        return Err(Error::Degenerate("subgradient requires β ≠ 0".into()));
    }
    Ok(beta.mapv(|b| {
        let sign = if b == S::zero() { S::zero() } else { b.signum() };
        b / nb + sign * s.inv_sqrt()
    }))
}

/// `W_β` as the symmetric pair `(w_β, w_β)`.
pub fn subgradient_basic<S: Scalar>(beta: &Array1<S>, s: &Sparsity<S>) -> Result<FactorPair<S>> {
    Ok(FactorPair::symmetric(w_beta(beta, s)?))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubgradientFamily<S> {
    Basic,
    /// `W⊥ = (w_β ũᵀ + ṽ w_βᵀ)/√s` with `ũ, ṽ` off the support, `‖·‖∞ ≤ 1`.
    Family1 { u_tilde: Array1<S>, v_tilde: Array1<S> },
    /// Any `W⊥ ∈ T⊥` with operator norm at most one.
    Family2 { w_perp: Array2<S> },
    /// `W⊥ = P_{T⊥∩I⊥}(W̃)` for `W̃` with `⟨W̃u, v⟩ ≤ θ_s(u, v)/5`.
    Family3 { w_tilde: Array2<S> },
}

#[derive(Debug, Clone)]
pub struct SubgradientSpec<S> {
    pub beta: Array1<S>,
    pub family: SubgradientFamily<S>,
    pub s: Sparsity<S>,
}

fn check_sparse_beta<S: Scalar>(beta: &Array1<S>, s: &Sparsity<S>) -> Result<()> {
    let nnz = beta.iter().filter(|x| **x != S::zero()).count();
    if S::from_usize(nnz).unwrap_or_else(S::max_value) > s.value() {
        return Err(Error::Validity(format!(
            "β has {nnz} nonzeros, more than s = {}",
            s.value()
        )));
    }
    Ok(())
}

fn perturbation<S: Scalar>(
    spaces: &ModelSpaces<S>,
    w: &Array1<S>,
    family: &SubgradientFamily<S>,
    s: &Sparsity<S>,
) -> Result<Option<Array2<S>>> {
    let p = spaces.dim();
    let tol = S::lit(1e-10);
    match family {
        SubgradientFamily::Basic => Ok(None),
        SubgradientFamily::Family1 { u_tilde, v_tilde } => {
            for (name, z) in [("ũ", u_tilde), ("ṽ", v_tilde)] {
                if z.len() != p {
                    return Err(Error::shape(p, z.len()));
                }
                if (0..p).any(|i| spaces.on_support(i) && z[i] != S::zero()) {
                    return Err(Error::Validity(format!("family 1: {name} must vanish on supp(β)")));
                }
                if norm_inf(z.view()) > S::one() {
                    return Err(Error::Validity(format!("family 1: ‖{name}‖∞ exceeds 1")));
                }
            }
            let m = (outer(w.view(), u_tilde.view()) + outer(v_tilde.view(), w.view())) * s.inv_sqrt();
            Ok(Some(m))
        }
        SubgradientFamily::Family2 { w_perp } => {
            if w_perp.dim() != (p, p) {
                return Err(Error::shape(format!("({p}, {p})"), format!("{:?}", w_perp.dim())));
            }
            let in_t = spaces.project(w_perp, ModelSubspace::T)?;
            if frobenius(&in_t) > tol * frobenius(w_perp) {
                return Err(Error::Validity("family 2: W⊥ is not in T⊥".into()));
            }
            let op = operator_norm(w_perp);
            if op > S::one() + S::lit(1e-12) {
                return Err(Error::Validity(format!(
                    "family 2: operator norm {op} exceeds 1"
                )));
            }
            Ok(Some(w_perp.clone()))
        }
        SubgradientFamily::Family3 { w_tilde } => {
            if w_tilde.dim() != (p, p) {
                return Err(Error::shape(format!("({p}, {p})"), format!("{:?}", w_tilde.dim())));
            }
            let pairs = SamplePairs::new(p, s.value().to_f64_lossy(), FAMILY3_SEED)
                .take(FAMILY3_SAMPLES);
            let worst = max_ratio(w_tilde, pairs, s);
            if worst > S::lit(0.2) * (S::one() + S::lit(1e-9)) {
                return Err(Error::Validity(format!(
                    "family 3: sampled ⟨W̃u,v⟩/θ_s(u,v) reaches {worst}, above 1/5"
                )));
            }
            Ok(Some(spaces.project(w_tilde, ModelSubspace::TPerpAndIPerp)?))
        }
    }
}

/// Dense subgradient `W_β + W⊥` for one family.
pub fn subgradient_family<S: Scalar>(spec: &SubgradientSpec<S>) -> Result<Array2<S>> {
    subgradient_combination(&spec.beta, &spec.s, &[(S::one(), spec.family.clone())])
}

/// `W_β + Σ c_i W⊥_i` for a convex combination of family perturbations.
pub fn subgradient_combination<S: Scalar>(
    beta: &Array1<S>,
    s: &Sparsity<S>,
    parts: &[(S, SubgradientFamily<S>)],
) -> Result<Array2<S>> {
    let spaces = ModelSpaces::new(beta)?;
    check_sparse_beta(beta, s)?;
    let total: S = parts.iter().map(|(c, _)| *c).sum();
    if parts.iter().any(|(c, _)| *c < S::zero()) || (total - S::one()).abs() > S::lit(1e-12) {
        return Err(Error::Validity("combination weights must be nonnegative and sum to 1".into()));
    }
    let w = w_beta(beta, s)?;
    let mut out = outer(w.view(), w.view());
    for (c, family) in parts {
        if let Some(m) = perturbation(&spaces, &w, family, s)? {
            out.scaled_add(*c, &m);
        }
    }
    Ok(out)
}

/// Deterministic stream of test pairs `(u, v)` mixing dense Gaussian,
/// random-support sparse, signed 1-sparse and anchor-perturbed vectors.
pub struct SamplePairs<S> {
    p: usize,
    max_support: usize,
    anchor: Option<Array1<S>>,
    rng: Rng,
    counter: usize,
}

impl<S: Scalar> SamplePairs<S> {
    pub fn new(p: usize, s_hint: f64, seed: u64) -> Self {
        let max_support = ((2.0 * s_hint).ceil() as usize).clamp(1, p.max(1));
        SamplePairs {
            p,
            max_support,
            anchor: None,
            rng: rng::stream(seed, 0xA70),
            counter: 0,
        }
    }

    /// Adds samples of the form `β + small noise`, probing near-equality.
    pub fn with_anchor(mut self, beta: &Array1<S>) -> Self {
        self.anchor = Some(beta.clone());
        self
    }

    fn gaussian(&mut self) -> Array1<S> {
        let p = self.p;
        Array1::from_shape_fn(p, |_| S::lit(StandardNormal.sample(&mut self.rng)))
    }

    fn sparse(&mut self) -> Array1<S> {
        let k = self.rng.random_range(1..=self.max_support);
        let idx = rand::seq::index::sample(&mut self.rng, self.p, k);
        let mut z = Array1::zeros(self.p);
        for i in idx {
            z[i] = S::lit(StandardNormal.sample(&mut self.rng));
        }
        z
    }

    fn one_sparse(&mut self) -> Array1<S> {
        let mut z = Array1::zeros(self.p);
        let i = self.rng.random_range(0..self.p);
        z[i] = if self.rng.random::<bool>() { S::one() } else { -S::one() };
        z
    }

    fn near_anchor(&mut self, beta: &Array1<S>) -> Array1<S> {
        let scale = S::lit(10f64.powf(self.rng.random_range(-6.0..0.0)));
        let noise = self.sparse();
        beta + &(noise * scale * norm2(beta.view()))
    }
}

impl<S: Scalar> Iterator for SamplePairs<S> {
    type Item = (Array1<S>, Array1<S>);

    fn next(&mut self) -> Option<Self::Item> {
        let kind = self.counter % if self.anchor.is_some() { 5 } else { 4 };
        self.counter += 1;
        let pair = match kind {
            0 => (self.gaussian(), self.gaussian()),
            1 => (self.sparse(), self.sparse()),
            2 => (self.one_sparse(), self.sparse()),
            3 => (self.sparse(), self.gaussian()),
            _ => {
                let beta = self.anchor.clone().expect("anchor present");
                (self.near_anchor(&beta), self.near_anchor(&beta))
            }
        };
        Some(pair)
    }
}

fn max_ratio<S: Scalar>(
    w: &Array2<S>,
    pairs: impl Iterator<Item = (Array1<S>, Array1<S>)>,
    s: &Sparsity<S>,
) -> S {
    let mut worst = S::neg_infinity();
    for (u, v) in pairs {
        let th = factor_gauge(u.view(), s) * factor_gauge(v.view(), s);
        if th == S::zero() {
            continue;
        }
        let val = v.dot(&w.dot(&u));
        worst = worst.max(val / th);
    }
    worst
}

/// Result of the sampled subgradient verification.
#[derive(Debug, Clone, Copy)]
pub struct SubgradientCheck<S> {
    /// `|⟨Wβ,β⟩ − θ_s(β,β)| / θ_s(β,β)`.
    pub equality_rel_err: S,
    /// `max ⟨Wu,v⟩/θ_s(u,v)` over the sampled pairs.
    pub max_ratio: S,
    pub samples: usize,
}

impl<S: Scalar> SubgradientCheck<S> {
    pub fn passes(&self, eq_tol: S, ratio_slack: S) -> bool {
        self.equality_rel_err <= eq_tol && self.max_ratio <= S::one() + ratio_slack
    }
}

/// Checks both subgradient conditions for `W` at `β βᵀ` on sampled pairs.
pub fn check_subgradient<S: Scalar>(
    w: &Array2<S>,
    beta: &Array1<S>,
    s: &Sparsity<S>,
    samples: usize,
    seed: u64,
) -> SubgradientCheck<S> {
    let th = factor_gauge(beta.view(), s).powi(2);
    let val = beta.dot(&w.dot(beta));
    let pairs = SamplePairs::new(beta.len(), s.value().to_f64_lossy(), seed)
        .with_anchor(beta)
        .take(samples);
    SubgradientCheck {
        equality_rel_err: (val - th).abs() / th,
        max_ratio: max_ratio(w, pairs, s),
        samples,
    }
}
