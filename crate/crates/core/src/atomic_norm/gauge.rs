use ndarray::ArrayView1;

use crate::error::{Error, Result};
use crate::factored::{FactorPair, FactoredMatrix};
use crate::linalg::{norm1, norm2};
use crate::scalar::{Scalar, Sparsity};

/// `g(z) = ‖z‖₂ + ‖z‖₁/√s`.
pub fn factor_gauge<S: Scalar>(z: ArrayView1<S>, s: &Sparsity<S>) -> S {
    norm2(z) + norm1(z) * s.inv_sqrt()
}

/// `θ_s(u, v) = g(u) g(v)` on raw vectors.
pub fn theta<S: Scalar>(u: ArrayView1<S>, v: ArrayView1<S>, s: &Sparsity<S>) -> Result<S> {
    if u.len() != v.len() {
        return Err(Error::shape(u.len(), v.len()));
    }
    Ok(factor_gauge(u, s) * factor_gauge(v, s))
}

pub fn theta_s<S: Scalar>(pair: &FactorPair<S>, s: &Sparsity<S>) -> Result<S> {
    theta(pair.u.view(), pair.v.view(), s)
}

/// `Σ_k θ_s(u_k, v_k)` for the given factorization: an upper bound on the
/// mixed norm of the represented matrix.
pub fn factorization_value<S: Scalar>(f: &FactoredMatrix<S>, s: &Sparsity<S>) -> S {
    f.pairs()
        .iter()
        .map(|q| factor_gauge(q.u.view(), s) * factor_gauge(q.v.view(), s))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};

    fn sp(s: f64) -> Sparsity<f64> {
        Sparsity::new(s).unwrap()
    }

    fn e(p: usize, i: usize) -> Array1<f64> {
        let mut z = Array1::zeros(p);
        z[i] = 1.0;
        z
    }

    #[test]
    fn gauge_examples() {
        assert_eq!(factor_gauge(Array1::<f64>::zeros(4).view(), &sp(4.0)), 0.0);
        assert_eq!(factor_gauge(e(4, 0).view(), &sp(1.0)), 2.0);
        let z = array![1.0, 1.0, 1.0, 0.0];
        assert!((factor_gauge(z.view(), &sp(3.0)) - 2.0 * 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn theta_examples() {
        let p = FactorPair::new(e(4, 0), e(4, 0)).unwrap();
        assert_eq!(theta_s(&p, &sp(1.0)).unwrap(), 4.0);
        let z = FactorPair::new(Array1::zeros(4), array![1.0, -2.0, 3.0, 0.5]).unwrap();
        assert_eq!(theta_s(&z, &sp(2.0)).unwrap(), 0.0);
        let q = FactorPair::new(e(4, 0), array![1.0, 1.0, 0.0, 0.0]).unwrap();
        // g(e₁) = 1 + 1/√2 and g((1,1,0,0)) = 2√2 when s = 2
        let expect = (1.0 + 0.5f64.sqrt()) * 2.0 * 2f64.sqrt();
        assert!((theta_s(&q, &sp(2.0)).unwrap() - expect).abs() < 1e-12);
        assert!((expect - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(theta(e(3, 0).view(), e(4, 0).view(), &sp(1.0)).is_err());
    }

    #[test]
    fn factorization_value_is_additive() {
        let f = FactoredMatrix::<f64>::empty(3, false);
        assert_eq!(factorization_value(&f, &sp(1.0)), 0.0);
        let f = FactoredMatrix::from_pairs(
            3,
            false,
            vec![
                FactorPair::new(e(3, 0), e(3, 0)).unwrap(),
                FactorPair::new(e(3, 1), e(3, 1)).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(factorization_value(&f, &sp(1.0)), 8.0);
    }
}
