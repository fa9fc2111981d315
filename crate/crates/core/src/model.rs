//! Synthetic sparse phase retrieval instances and the factored measurement
//! operator.
//!
//! Observations are `y_i = ⟨x_i, β*⟩² + ξ_i` with `x_i ~ N(0, I_p)`. In the
//! lifted view `y_i = ⟨x_i x_iᵀ, B*⟩ + ξ_i` with `B* = β* β*ᵀ`; with a factored
//! `B = Σ u_k v_kᵀ` the inner product is `Σ_k ⟨x_i, u_k⟩⟨x_i, v_k⟩`, so no
//! `p × p` matrix is ever built.

use std::fmt;
use std::io::{BufRead, Write};

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factored::FactoredMatrix;
use crate::linalg::{norm2, row_sparse_product};
use crate::rng;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    None,
    Gaussian,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub model: NoiseKind,
    /// Standard deviation, used by the Gaussian model only.
    #[serde(default)]
    pub sigma: f64,
}

impl NoiseConfig {
    pub const NONE: NoiseConfig = NoiseConfig {
        model: NoiseKind::None,
        sigma: 0.0,
    };

    pub fn gaussian(sigma: f64) -> Self {
        NoiseConfig {
            model: NoiseKind::Gaussian,
            sigma,
        }
    }

    pub fn poisson() -> Self {
        NoiseConfig {
            model: NoiseKind::Poisson,
            sigma: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::Parameter(format!(
                "noise sigma must be finite and nonnegative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

impl fmt::Display for NoiseConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            NoiseKind::None => write!(f, "none"),
            NoiseKind::Gaussian => write!(f, "gaussian({})", self.sigma),
            NoiseKind::Poisson => write!(f, "poisson"),
        }
    }
}

impl std::str::FromStr for NoiseConfig {
    type Err = Error;

    fn from_str(tag: &str) -> Result<Self> {
        let t = tag.trim();
        if t == "none" {
            return Ok(NoiseConfig::NONE);
        }
        if t == "poisson" {
            return Ok(NoiseConfig::poisson());
        }
        if let Some(inner) = t.strip_prefix("gaussian(").and_then(|r| r.strip_suffix(')')) {
            let sigma = inner
                .parse::<f64>()
                .map_err(|e| Error::Parameter(format!("bad gaussian sigma `{inner}`: {e}")))?;
            let cfg = NoiseConfig::gaussian(sigma);
            cfg.validate()?;
            return Ok(cfg);
        }
        Err(Error::Parameter(format!("unknown noise tag `{tag}`")))
    }
}

/// Hidden `s`-sparse signal of a synthetic instance.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth<S> {
    pub beta_star: Array1<S>,
    /// Sorted support indices.
    pub support: Vec<usize>,
    pub norm: S,
}

#[derive(Debug, Clone)]
pub struct ProblemInstance<S> {
    pub design: Array2<S>,
    pub observations: Array1<S>,
    pub noise: NoiseConfig,
    pub truth: Option<GroundTruth<S>>,
    pub seed: u64,
}

impl<S: Scalar> ProblemInstance<S> {
    pub fn new(design: Array2<S>, observations: Array1<S>, noise: NoiseConfig, seed: u64) -> Result<Self> {
        let (n, p) = design.dim();
        if n == 0 || p == 0 {
            return Err(Error::Parameter(format!("empty design {n}x{p}")));
        }
        if observations.len() != n {
            return Err(Error::shape(format!("{n} observations"), observations.len()));
        }
        if observations.iter().any(|y| !y.is_finite()) {
            return Err(Error::Parameter("observations must be finite".into()));
        }
        Ok(ProblemInstance {
            design,
            observations,
            noise,
            truth: None,
            seed,
        })
    }

    pub fn with_truth(mut self, truth: GroundTruth<S>) -> Result<Self> {
        if truth.beta_star.len() != self.p() {
            return Err(Error::shape(self.p(), truth.beta_star.len()));
        }
        self.truth = Some(truth);
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.design.nrows()
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.design.ncols()
    }

    /// Same design and truth, observations replaced.
    pub fn with_observations(&self, observations: Array1<S>) -> Result<Self> {
        let mut out = Self::new(self.design.clone(), observations, self.noise, self.seed)?;
        out.truth = self.truth.clone();
        Ok(out)
    }
}

/// Draws an `s`-sparse vector with uniformly random support and Gaussian
/// nonzeros rescaled to the requested ℓ2 norm.
pub fn generate_truth<S: Scalar>(p: usize, s: usize, norm: S, seed: u64) -> Result<GroundTruth<S>> {
    if s == 0 || s > p {
        return Err(Error::Parameter(format!("need 1 <= s <= p, got s = {s}, p = {p}")));
    }
    if !(norm > S::zero()) {
        return Err(Error::Parameter(format!("norm must be positive, got {norm}")));
    }
    let mut rng = rng::from_seed(seed);
    let mut support = rand::seq::index::sample(&mut rng, p, s).into_vec();
    support.sort_unstable();
    let mut beta = Array1::<S>::zeros(p);
    loop {
        for &i in &support {
            let z: f64 = StandardNormal.sample(&mut rng);
            beta[i] = S::lit(z);
        }
        if support.iter().all(|&i| beta[i] != S::zero()) {
            break;
        }
    }
    let scale = norm / norm2(beta.view());
    beta.mapv_inplace(|x| x * scale);
    Ok(GroundTruth {
        beta_star: beta,
        support,
        norm,
    })
}

/// `n × p` matrix of i.i.d. standard normal entries, filled row by row.
pub fn sample_design<S: Scalar>(n: usize, p: usize, seed: u64) -> Array2<S> {
    let mut rng = rng::from_seed(seed);
    Array2::from_shape_simple_fn((n, p), || {
        let z: f64 = StandardNormal.sample(&mut rng);
        S::lit(z)
    })
}

/// `y_i = ⟨x_i, β⟩²`.
pub fn forward_clean<S: Scalar>(design: ArrayView2<S>, beta: ArrayView1<S>) -> Result<Array1<S>> {
    if design.ncols() != beta.len() {
        return Err(Error::shape(design.ncols(), beta.len()));
    }
    Ok(design.dot(&beta).mapv(|t| t * t))
}

pub fn apply_noise<S: Scalar>(y_clean: &Array1<S>, cfg: &NoiseConfig, seed: u64) -> Result<Array1<S>> {
    cfg.validate()?;
    let mut rng = rng::from_seed(seed);
    match cfg.model {
        NoiseKind::None => Ok(y_clean.clone()),
        NoiseKind::Gaussian => Ok(y_clean.mapv(|y| {
            let z: f64 = StandardNormal.sample(&mut rng);
            y + S::lit(cfg.sigma * z)
        })),
        NoiseKind::Poisson => {
            let mut out = Array1::zeros(y_clean.len());
            for (o, &mean) in out.iter_mut().zip(y_clean.iter()) {
                let m = mean.to_f64_lossy();
                if !(m >= 0.0) || !m.is_finite() {
                    return Err(Error::Domain(format!("poisson mean must be >= 0, got {m}")));
                }
                *o = if m == 0.0 {
                    S::zero()
                } else {
                    let d = Poisson::new(m).map_err(|e| Error::Domain(e.to_string()))?;
                    S::lit(d.sample(&mut rng))
                };
            }
            Ok(out)
        }
    }
}

/// `⟨x xᵀ, Σ_k u_k v_kᵀ⟩ = Σ_k ⟨x, u_k⟩⟨x, v_k⟩` in `O(p r)`.
pub fn lifted_inner<S: Scalar>(x: ArrayView1<S>, f: &FactoredMatrix<S>) -> Result<S> {
    if x.len() != f.dim() {
        return Err(Error::shape(f.dim(), x.len()));
    }
    Ok(f.pairs().iter().map(|q| x.dot(&q.u) * x.dot(&q.v)).sum())
}

/// `⟨x_i x_iᵀ, B⟩` for every row of the design, in `O(n p r)`.
pub fn lifted_predictions<S: Scalar>(design: ArrayView2<S>, f: &FactoredMatrix<S>) -> Result<Array1<S>> {
    if design.ncols() != f.dim() {
        return Err(Error::shape(f.dim(), design.ncols()));
    }
    let mut pred = Array1::zeros(design.nrows());
    if f.is_empty() {
        return Ok(pred);
    }
    let xu = row_sparse_product(design, &f.u_stack());
    if f.is_symmetric() {
        for (o, row) in pred.iter_mut().zip(xu.rows()) {
            *o = row.iter().map(|a| *a * *a).sum();
        }
    } else {
        let xv = row_sparse_product(design, &f.v_stack());
        for ((o, a), b) in pred.iter_mut().zip(xu.rows()).zip(xv.rows()) {
            *o = a.dot(&b);
        }
    }
    Ok(pred)
}

/// Builds a full synthetic instance. Truth, design and noise use independent
/// sub-streams of `seed`.
pub fn synthetic_instance<S: Scalar>(
    p: usize,
    s: usize,
    n: usize,
    beta_norm: S,
    noise: NoiseConfig,
    seed: u64,
) -> Result<ProblemInstance<S>> {
    if n == 0 {
        return Err(Error::Parameter("n must be >= 1".into()));
    }
    let truth = generate_truth(p, s, beta_norm, rng::mix_seed(&[seed, 1]))?;
    let design = sample_design::<S>(n, p, rng::mix_seed(&[seed, 2]));
    let clean = forward_clean(design.view(), truth.beta_star.view())?;
    let y = apply_noise(&clean, &noise, rng::mix_seed(&[seed, 3]))?;
    ProblemInstance::new(design, y, noise, seed)?.with_truth(truth)
}

/// Writes the instance as text: one header line
/// `# n=<n>,p=<p>,seed=<seed>,noise=<tag>`, a column line `y,x0,…,x{p-1}`
/// and one row `y_i,x_i0,…` per observation (17 significant digits).
pub fn write_instance_csv<S: Scalar, W: Write>(inst: &ProblemInstance<S>, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# n={},p={},seed={},noise={}",
        inst.n(),
        inst.p(),
        inst.seed,
        inst.noise
    )?;
    let mut header = String::from("y");
    for j in 0..inst.p() {
        header.push_str(&format!(",x{j}"));
    }
    writeln!(w, "{header}")?;
    for (y, row) in inst.observations.iter().zip(inst.design.rows()) {
        let mut line = format!("{:.16e}", y.to_f64_lossy());
        for x in row {
            line.push_str(&format!(",{:.16e}", x.to_f64_lossy()));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_instance_csv<S: Scalar, R: BufRead>(r: R) -> Result<ProblemInstance<S>> {
    let mut lines = r.lines();
    let bad = |m: &str| Error::Parameter(format!("instance csv: {m}"));
    let head = lines.next().ok_or_else(|| bad("missing header"))??;
    let head = head.strip_prefix("# ").ok_or_else(|| bad("header must start with `# `"))?;
    let (mut n, mut p, mut seed, mut noise) = (None, None, None, None);
    // `noise=` is last and may itself contain commas-free parentheses.
    for field in head.split(',') {
        let (k, v) = field.split_once('=').ok_or_else(|| bad("malformed header field"))?;
        match k {
            "n" => n = v.parse::<usize>().ok(),
            "p" => p = v.parse::<usize>().ok(),
            "seed" => seed = v.parse::<u64>().ok(),
            "noise" => noise = Some(v.parse::<NoiseConfig>()?),
            _ => return Err(bad(&format!("unknown header key `{k}`"))),
        }
    }
    let (n, p) = (n.ok_or_else(|| bad("n"))?, p.ok_or_else(|| bad("p"))?);
    let _columns = lines.next().ok_or_else(|| bad("missing column line"))??;
    let mut design = Array2::zeros((n, p));
    let mut y = Array1::zeros(n);
    for i in 0..n {
        let line = lines.next().ok_or_else(|| bad("truncated rows"))??;
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        if vals.len() != p + 1 {
            return Err(Error::shape(p + 1, vals.len()));
        }
        y[i] = S::lit(vals[0]);
        for j in 0..p {
            design[[i, j]] = S::lit(vals[j + 1]);
        }
    }
    ProblemInstance::new(
        design,
        y,
        noise.ok_or_else(|| bad("noise"))?,
        seed.ok_or_else(|| bad("seed"))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factored::FactorPair;
    use ndarray::array;

    #[test]
    fn dense_truth_when_s_equals_p() {
        let t = generate_truth::<f64>(5, 5, 1.0, 3).unwrap();
        assert_eq!(t.support, vec![0, 1, 2, 3, 4]);
        assert!(t.beta_star.iter().all(|x| *x != 0.0));
        assert!((norm2(t.beta_star.view()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_sparse_truth_has_requested_norm() {
        let t = generate_truth::<f64>(100, 1, 2.0, 11).unwrap();
        let nz: Vec<_> = t.beta_star.iter().filter(|x| **x != 0.0).collect();
        assert_eq!(nz.len(), 1);
        assert!((nz[0].abs() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn truth_is_seed_deterministic_and_validated() {
        assert_eq!(
            generate_truth::<f64>(30, 4, 1.0, 9).unwrap(),
            generate_truth::<f64>(30, 4, 1.0, 9).unwrap()
        );
        assert!(generate_truth::<f64>(3, 4, 1.0, 0).is_err());
        assert!(generate_truth::<f64>(3, 0, 1.0, 0).is_err());
    }

    #[test]
    fn design_reproducible_and_seed_sensitive() {
        let a = sample_design::<f64>(1, 1, 5);
        assert_eq!(a, sample_design::<f64>(1, 1, 5));
        assert_ne!(sample_design::<f64>(4, 3, 5), sample_design::<f64>(4, 3, 6));
    }

    #[test]
    fn forward_examples() {
        let x = array![[2.0f64, 1.0], [-3.0, 0.5]];
        assert_eq!(forward_clean(x.view(), array![1.0, 0.0].view()).unwrap(), array![4.0, 9.0]);
        assert_eq!(forward_clean(x.view(), array![0.0, 0.0].view()).unwrap(), array![0.0, 0.0]);
        let b = array![0.3, -0.7];
        let y1 = forward_clean(x.view(), b.view()).unwrap();
        let y3 = forward_clean(x.view(), (&b * 3.0).view()).unwrap();
        let yneg = forward_clean(x.view(), (-&b).view()).unwrap();
        for i in 0..2 {
            assert!((y3[i] - 9.0 * y1[i]).abs() < 1e-12);
            assert_eq!(yneg[i], y1[i]);
        }
        assert!(forward_clean(x.view(), array![1.0].view()).is_err());
    }

    #[test]
    fn noise_edge_cases() {
        let y = array![1.0, 0.0, 2.5];
        assert_eq!(apply_noise(&y, &NoiseConfig::gaussian(0.0), 1).unwrap(), y);
        assert_eq!(apply_noise(&y, &NoiseConfig::NONE, 1).unwrap(), y);
        let zero = Array1::<f64>::zeros(4);
        assert_eq!(apply_noise(&zero, &NoiseConfig::poisson(), 1).unwrap(), zero);
        assert!(matches!(
            apply_noise(&array![-1.0], &NoiseConfig::poisson(), 1),
            Err(Error::Domain(_))
        ));
        assert!(apply_noise(&y, &NoiseConfig::gaussian(-1.0), 1).is_err());
    }

    #[test]
    fn lifted_inner_examples() {
        let beta = array![1.0f64, -2.0, 0.5];
        let x = array![0.3, 0.1, -1.0];
        let f = FactoredMatrix::from_pairs(3, true, vec![FactorPair::symmetric(beta.clone())]).unwrap();
        assert!((lifted_inner(x.view(), &f).unwrap() - x.dot(&beta).powi(2)).abs() < 1e-15);
        assert_eq!(lifted_inner(x.view(), &FactoredMatrix::empty(3, false)).unwrap(), 0.0);
        assert!(lifted_inner(array![1.0].view(), &f).is_err());
    }

    #[test]
    fn noise_tag_round_trip() {
        for cfg in [NoiseConfig::NONE, NoiseConfig::poisson(), NoiseConfig::gaussian(0.05)] {
            assert_eq!(cfg.to_string().parse::<NoiseConfig>().unwrap(), cfg);
        }
        assert!("laplace".parse::<NoiseConfig>().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let inst = synthetic_instance::<f64>(6, 2, 5, 1.0, NoiseConfig::gaussian(0.1), 42).unwrap();
        let mut buf = Vec::new();
        write_instance_csv(&inst, &mut buf).unwrap();
        let back: ProblemInstance<f64> = read_instance_csv(&buf[..]).unwrap();
        assert_eq!(back.design, inst.design);
        assert_eq!(back.observations, inst.observations);
        assert_eq!(back.seed, 42);
        assert_eq!(back.noise, inst.noise);
    }
}
