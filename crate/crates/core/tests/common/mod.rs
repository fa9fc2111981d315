//! Dense reference computations shared by the integration suites. Everything
//! here is written against nalgebra and plain loops, independently of the
//! factored code paths under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use ndarray::{Array1, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sparselift::FactoredMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, p: usize) -> Array1<f64> {
    Array1::from_shape_fn(p, |_| StandardNormal.sample(rng))
}

pub fn gaussian_mat(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, p), |_| StandardNormal.sample(rng))
}

/// Gaussian vector supported on `k` random coordinates.
pub fn sparse_vec(rng: &mut ChaCha8Rng, p: usize, k: usize) -> Array1<f64> {
    let mut z = Array1::zeros(p);
    for i in rand::seq::index::sample(rng, p, k.min(p)) {
        z[i] = StandardNormal.sample(rng);
    }
    z
}

pub fn to_na_mat(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub fn to_na_vec(a: &Array1<f64>) -> DVector<f64> {
    DVector::from_iterator(a.len(), a.iter().copied())
}

/// `Σ u_k v_kᵀ` assembled entry by entry.
pub fn dense_lifted(f: &FactoredMatrix<f64>) -> DMatrix<f64> {
    let p = f.dim();
    let mut b = DMatrix::zeros(p, p);
    for pair in f.pairs() {
        b += to_na_vec(&pair.u) * to_na_vec(&pair.v).transpose();
    }
    b
}

pub fn gauge(z: &Array1<f64>, s: f64) -> f64 {
    let l2 = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    let l1 = z.iter().map(|x| x.abs()).sum::<f64>();
    l2 + l1 / s.sqrt()
}

pub fn theta(u: &Array1<f64>, v: &Array1<f64>, s: f64) -> f64 {
    gauge(u, s) * gauge(v, s)
}

/// `r_i = y_i − x_iᵀ B x_i` with dense `B`.
pub fn dense_residuals(x: &DMatrix<f64>, y: &Array1<f64>, b: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(x.nrows(), |i, _| {
        let xi = x.row(i).transpose();
        y[i] - (xi.transpose() * b * &xi)[(0, 0)]
    })
}

pub fn dense_objective(x: &DMatrix<f64>, y: &Array1<f64>, f: &FactoredMatrix<f64>, lambda: f64, s: f64) -> f64 {
    let r = dense_residuals(x, y, &dense_lifted(f));
    let charge: f64 = f.pairs().iter().map(|q| theta(&q.u, &q.v, s)).sum();
    r.norm_squared() / (2.0 * x.nrows() as f64) + lambda * charge
}

/// `Z = (1/n) Σ r_i x_i x_iᵀ`.
pub fn dense_certificate(x: &DMatrix<f64>, r: &DVector<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut z = DMatrix::zeros(x.ncols(), x.ncols());
    for i in 0..n {
        let xi = x.row(i).transpose();
        z += &xi * xi.transpose() * (r[i] / n as f64);
    }
    z
}

/// Top eigenpair of the symmetric part of `B`, eigenvalues sorted descending.
pub fn top_eigen(b: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (b + b.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = DMatrix::from_fn(b.nrows(), idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Numerical minimiser of `⟨x,y⟩ + ½‖y‖² + a‖y‖₂ + b‖y‖₁`.
///
/// Each coordinate of an optimal `y` opposes `x_i` and vanishes when
/// `|x_i| ≤ b`; on the remaining coordinates the linear part is
/// `−Σ c_i |y_i|` with `c_i = |x_i| − b`, maximised for fixed `‖y‖ = ρ` by
/// `|y| ∝ c`. That leaves a 1-D problem in `ρ`, solved by golden section.
pub fn prox_oracle(x: &Array1<f64>, a: f64, b: f64) -> Array1<f64> {
    let c = x.mapv(|v| (v.abs() - b).max(0.0));
    let cn = c.dot(&c).sqrt();
    if cn == 0.0 {
        return Array1::zeros(x.len());
    }
    let dir = Array1::from_shape_fn(x.len(), |i| -x[i].signum() * c[i] / cn);
    let h = |rho: f64| {
        let y = &dir * rho;
        x.dot(&y) + 0.5 * rho * rho + a * rho + b * y.iter().map(|v| v.abs()).sum::<f64>()
    };
    let rho = golden_section(h, 0.0, cn + 1.0, 200);
    let rho = if h(0.0) <= h(rho) { 0.0 } else { rho };
    dir * rho
}
