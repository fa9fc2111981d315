use ndarray::{Array1, ArrayView1};

use crate::error::Result;
use crate::factored::FactorPair;
use crate::linalg::norm2;
use crate::scalar::{Scalar, Sparsity};

/// Splits `z` into `s`-sparse pieces with disjoint supports.
///
/// Coordinates are ordered by decreasing magnitude (ties by lower index) and
/// the nonzero ones are cut into consecutive blocks of length `s`. The pieces
/// sum to `z` exactly and `Σ ‖z_i‖₂ ≤ ‖z‖₂ + ‖z‖₁/√s`.
pub fn sparse_split<S: Scalar>(z: ArrayView1<S>, s: &Sparsity<S>) -> Result<Vec<Array1<S>>> {
    let block = s.block_len()?;
    let mut order: Vec<usize> = (0..z.len()).filter(|&i| z[i] != S::zero()).collect();
    order.sort_by(|&i, &j| {
        z[j].abs()
            .partial_cmp(&z[i].abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    Ok(order
        .chunks(block)
        .map(|idx| {
            let mut piece = Array1::zeros(z.len());
            for &i in idx {
                piece[i] = z[i];
            }
            piece
        })
        .collect())
}

/// One term `coefficient · u vᵀ` of an atomic decomposition; both sides of
/// `pair` are unit-ℓ2 and `s`-sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom<S> {
    pub coefficient: S,
    pub pair: FactorPair<S>,
}

/// Decomposes `u vᵀ` into sparse unit atoms via the cross product of the
/// sparse splits of both factors. The coefficients are nonnegative and sum to
/// at most `θ_s(u, v)`.
pub fn atomic_decompose<S: Scalar>(pair: &FactorPair<S>, s: &Sparsity<S>) -> Result<Vec<Atom<S>>> {
    let left = sparse_split(pair.u.view(), s)?;
    let right = sparse_split(pair.v.view(), s)?;
    let normalize = |z: &Array1<S>| {
        let n = norm2(z.view());
        (n, z.mapv(|x| x / n))
    };
    let left: Vec<_> = left.iter().map(normalize).collect();
    let right: Vec<_> = right.iter().map(normalize).collect();
    let mut atoms = Vec::with_capacity(left.len() * right.len());
    for (nu, a) in &left {
        for (nv, b) in &right {
            atoms.push(Atom {
                coefficient: *nu * *nv,
                pair: FactorPair {
                    u: a.clone(),
                    v: b.clone(),
                },
            });
        }
    }
    Ok(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic_norm::{factor_gauge, theta_s};
    use ndarray::array;

    fn sp(s: f64) -> Sparsity<f64> {
        Sparsity::new(s).unwrap()
    }

    #[test]
    fn sparse_vector_is_one_block() {
        let z = array![0.0, 2.0, 0.0, -1.0];
        let pieces = sparse_split(z.view(), &sp(2.0)).unwrap();
        assert_eq!(pieces, vec![z]);
    }

    #[test]
    fn zero_vector_has_no_pieces() {
        let z = Array1::<f64>::zeros(5);
        assert!(sparse_split(z.view(), &sp(2.0)).unwrap().is_empty());
    }

    #[test]
    fn equal_entries_split_in_index_order() {
        let z = array![1.0, 1.0, 1.0, 1.0];
        let pieces = sparse_split(z.view(), &sp(2.0)).unwrap();
        assert_eq!(pieces, vec![array![1.0, 1.0, 0.0, 0.0], array![0.0, 0.0, 1.0, 1.0]]);
        let total: f64 = pieces.iter().map(|q| norm2(q.view())).sum();
        assert!((total - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(total <= factor_gauge(z.view(), &sp(2.0)));
    }

    #[test]
    fn split_needs_integer_sparsity() {
        assert!(sparse_split(array![1.0, 2.0].view(), &sp(1.5)).is_err());
    }

    #[test]
    fn decompose_basis_pair() {
        let p = FactorPair::new(array![1.0, 0.0], array![1.0, 0.0]).unwrap();
        let atoms = atomic_decompose(&p, &sp(1.0)).unwrap();
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].coefficient, 1.0);
        assert_eq!(atoms[0].pair, p);
    }

    #[test]
    fn decompose_zero_factor_is_empty() {
        let p = FactorPair::new(array![0.0, 0.0], array![1.0, 3.0]).unwrap();
        assert!(atomic_decompose(&p, &sp(1.0)).unwrap().is_empty());
    }

    #[test]
    fn decompose_two_by_two_cross_product() {
        let p = FactorPair::new(array![1.0, 1.0, 0.0, 0.0], array![0.0, 0.0, 1.0, 1.0]).unwrap();
        let atoms = atomic_decompose(&p, &sp(1.0)).unwrap();
        assert_eq!(atoms.len(), 4);
        assert!(atoms.iter().all(|a| a.coefficient == 1.0));
        let total: f64 = atoms.iter().map(|a| a.coefficient).sum();
        let theta = theta_s(&p, &sp(1.0)).unwrap();
        assert!((theta - (2f64.sqrt() + 2.0).powi(2)).abs() < 1e-12);
        assert!(total <= theta);
        let mut recon = ndarray::Array2::<f64>::zeros((4, 4));
        for a in &atoms {
            recon = recon + a.pair.outer() * a.coefficient;
        }
        assert_eq!(recon, p.outer());
    }
}
