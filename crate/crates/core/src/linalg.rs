//! Small dense kernels: symmetric Jacobi eigensolver, Gram-Schmidt and power
//! iteration. Sizes here are the factor rank or the sparsity level, so O(k³)
//! is fine.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::scalar::Scalar;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in decreasing order and the matching eigenvectors as
/// columns. Only the symmetric part of `a` is used.
pub fn sym_eigen<S: Scalar>(a: &Array2<S>) -> (Array1<S>, Array2<S>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let half = S::lit(0.5);
    let mut m = Array2::from_shape_fn((n, n), |(i, j)| half * (a[[i, j]] + a[[j, i]]));
    let mut vecs = Array2::<S>::eye(n);
    let eps = S::epsilon();

    let tiny = eps * m.iter().map(|x| *x * *x).sum::<S>().sqrt() / S::from_usize(n.max(1)).expect("n fits scalar");
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let app = m[[p, p]];
                let aqq = m[[q, q]];
                // negligible at the scale of the matrix: annihilate without rotating
                if apq.abs() <= tiny {
                    m[[p, q]] = S::zero();
                    m[[q, p]] = S::zero();
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (S::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let t = if theta == S::zero() { S::one() } else { t };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = vecs[[k, p]];
                    let vkq = vecs[[k, q]];
                    vecs[[k, p]] = c * vkp - s * vkq;
                    vecs[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[[j, j]]
            .partial_cmp(&m[[i, i]])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let vals = Array1::from_iter(order.iter().map(|&i| m[[i, i]]));
    let mut out = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        out.column_mut(dst).assign(&vecs.column(src));
    }
    (vals, out)
}

/// Spectral norm via the eigenvalues of `aᵀa`.
pub fn operator_norm<S: Scalar>(a: &Array2<S>) -> S {
    if a.is_empty() {
        return S::zero();
    }
    let gram = a.t().dot(a);
    let (vals, _) = sym_eigen(&gram);
    vals[0].max(S::zero()).sqrt()
}

/// Orthonormal basis of the column span of `a` by modified Gram-Schmidt with
/// one re-orthogonalisation pass. Columns whose residual norm falls below
/// `rel_tol` times their original norm are dropped.
pub fn orthonormal_basis<S: Scalar>(a: &Array2<S>, rel_tol: S) -> Array2<S> {
    let p = a.nrows();
    let mut basis: Vec<Array1<S>> = Vec::new();
    for col in a.columns() {
        let orig = norm2(col);
        if orig == S::zero() {
            continue;
        }
        let mut w = col.to_owned();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&w);
                w.scaled_add(-c, q);
            }
        }
        let nw = norm2(w.view());
        if nw > rel_tol * orig && nw > S::zero() {
            w.mapv_inplace(|x| x / nw);
            basis.push(w);
        }
    }
    let mut out = Array2::zeros((p, basis.len()));
    for (k, q) in basis.into_iter().enumerate() {
        out.column_mut(k).assign(&q);
    }
    out
}

/// Power iteration for the dominant eigenpair of a symmetric operator.
///
/// Stops after `max_iter` steps or when successive unit iterates differ by
/// less than `tol` (up to sign). Returns the Rayleigh quotient and the unit
/// vector; a zero operator returns `(0, start/‖start‖)`.
pub fn power_iteration<S: Scalar>(
    mut apply: impl FnMut(&Array1<S>) -> Array1<S>,
    start: Array1<S>,
    max_iter: usize,
    tol: S,
) -> (S, Array1<S>) {
    let n0 = norm2(start.view());
    let mut x = if n0 > S::zero() {
        start.mapv(|v| v / n0)
    } else {
        start
    };
    for _ in 0..max_iter {
        let y = apply(&x);
        let ny = norm2(y.view());
        if ny == S::zero() || !ny.is_finite() {
            return (S::zero(), x);
        }
        let y = y.mapv(|v| v / ny);
        let diff_plus = norm2((&y - &x).view());
        let diff_minus = norm2((&y + &x).view());
        x = y;
        if diff_plus.min(diff_minus) < tol {
            break;
        }
    }
    let ax = apply(&x);
    (x.dot(&ax), x)
}

/// `a · d`, skipping the zero rows of `d` when they are the majority
/// (factor stacks are usually row-sparse).
pub fn row_sparse_product<S: Scalar>(a: ArrayView2<S>, d: &Array2<S>) -> Array2<S> {
    let active: Vec<usize> = d
        .rows()
        .into_iter()
        .enumerate()
        .filter(|(_, r)| r.iter().any(|v| *v != S::zero()))
        .map(|(i, _)| i)
        .collect();
    if 2 * active.len() >= d.nrows() {
        return a.dot(d);
    }
    a.select(Axis(1), &active).dot(&d.select(Axis(0), &active))
}

#[inline]
pub fn norm2<S: Scalar>(x: ArrayView1<S>) -> S {
    x.dot(&x).sqrt()
}

#[inline]
pub fn norm1<S: Scalar>(x: ArrayView1<S>) -> S {
    x.iter().map(|v| v.abs()).sum()
}

#[inline]
pub fn norm_inf<S: Scalar>(x: ArrayView1<S>) -> S {
    x.iter().fold(S::zero(), |m, v| m.max(v.abs()))
}

/// Hilbert-Schmidt inner product.
pub fn hs_inner<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> S {
    a.iter().zip(b.iter()).map(|(x, y)| *x * *y).sum()
}

pub fn frobenius<S: Scalar>(a: &Array2<S>) -> S {
    hs_inner(a, a).sqrt()
}
