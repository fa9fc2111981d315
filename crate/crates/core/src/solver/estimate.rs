use ndarray::{Array1, ArrayView1};

use crate::error::{Error, Result};
use crate::factored::FactoredMatrix;
use crate::linalg::{norm2, orthonormal_basis, sym_eigen};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<S> {
    pub beta_hat: Array1<S>,
    /// Leading eigenvalue of the symmetrised lifted matrix.
    pub sigma1: S,
}

/// Closest `β̂β̂ᵀ` to the symmetric part of `Σ u_k v_kᵀ`, computed in the
/// span of the factors without forming a `p × p` matrix.
///
/// `β̂ = √max(σ₁,0) q₁` for the top eigenpair `(σ₁, q₁)`; the entry of
/// largest magnitude is made positive.
pub fn extract_estimate<S: Scalar>(f: &FactoredMatrix<S>) -> Result<Estimate<S>> {
    if f.is_empty() {
        return Err(Error::Degenerate("cannot extract an estimate from an empty factorization".into()));
    }
    let u = f.u_stack();
    let v = f.v_stack();
    let both = ndarray::concatenate(ndarray::Axis(1), &[u.view(), v.view()]).expect("equal row counts");
    let q = orthonormal_basis(&both, S::lit(1e-13));
    let p = f.dim();
    if q.ncols() == 0 {
        return Ok(Estimate {
            beta_hat: Array1::zeros(p),
            sigma1: S::zero(),
        });
    }
    let core = q.t().dot(&u).dot(&q.t().dot(&v).t());
    let (vals, vecs) = sym_eigen(&core);
    let sigma1 = vals[0];
    let mut beta = q.dot(&vecs.column(0)) * sigma1.max(S::zero()).sqrt();
    let lead = beta
        .iter()
        .enumerate()
        .fold((0, S::zero()), |(bi, bv), (i, x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) })
        .0;
    if beta[lead] < S::zero() {
        beta.mapv_inplace(|x| -x);
    }
    Ok(Estimate { beta_hat: beta, sigma1 })
}

/// `min(‖a − b‖₂, ‖a + b‖₂)`.
pub fn error_metric<S: Scalar>(beta_hat: ArrayView1<S>, beta_star: ArrayView1<S>) -> Result<S> {
    if beta_hat.len() != beta_star.len() {
        return Err(Error::shape(beta_star.len(), beta_hat.len()));
    }
    let minus = norm2((&beta_hat - &beta_star).view());
    let plus = norm2((&beta_hat + &beta_star).view());
    Ok(minus.min(plus))
}
