//! Factored matrices `B = Σ_k u_k v_kᵀ`.

use ndarray::{Array1, Array2, ArrayView1, Axis};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One rank-one term `u vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair<S> {
    pub u: Array1<S>,
    pub v: Array1<S>,
}

impl<S: Scalar> FactorPair<S> {
    pub fn new(u: Array1<S>, v: Array1<S>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::shape(
                format!("factors of equal length {}", u.len()),
                v.len(),
            ));
        }
        Ok(FactorPair { u, v })
    }

    /// The symmetric pair `(z, z)`.
    pub fn symmetric(z: Array1<S>) -> Self {
        FactorPair { v: z.clone(), u: z }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(|x| *x == S::zero()) || self.v.iter().all(|x| *x == S::zero())
    }

    /// Dense `u vᵀ`.
    pub fn outer(&self) -> Array2<S> {
        outer(self.u.view(), self.v.view())
    }
}

pub(crate) fn outer<S: Scalar>(a: ArrayView1<S>, b: ArrayView1<S>) -> Array2<S> {
    let col = a.insert_axis(Axis(1));
    let row = b.insert_axis(Axis(0));
    &col * &row
}

/// Ordered list of factor pairs sharing a dimension `p`.
///
/// In symmetric mode every pair has `u_k == v_k`, so the represented matrix
/// is PSD by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredMatrix<S> {
    pairs: Vec<FactorPair<S>>,
    p: usize,
    symmetric: bool,
}

impl<S: Scalar> FactoredMatrix<S> {
    pub fn empty(p: usize, symmetric: bool) -> Self {
        FactoredMatrix {
            pairs: Vec::new(),
            p,
            symmetric,
        }
    }

    pub fn from_pairs(p: usize, symmetric: bool, pairs: Vec<FactorPair<S>>) -> Result<Self> {
        let mut f = Self::empty(p, symmetric);
        for pair in pairs {
            f.push(pair)?;
        }
        Ok(f)
    }

    /// Builds from column stacks `U`, `V` (both `p × r`).
    pub fn from_stacks(u: &Array2<S>, v: &Array2<S>, symmetric: bool) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::shape(format!("{:?}", u.dim()), format!("{:?}", v.dim())));
        }
        let pairs = u
            .columns()
            .into_iter()
            .zip(v.columns())
            .map(|(a, b)| FactorPair {
                u: a.to_owned(),
                v: b.to_owned(),
            })
            .collect();
        Self::from_pairs(u.nrows(), symmetric, pairs)
    }

    pub fn push(&mut self, pair: FactorPair<S>) -> Result<()> {
        if pair.u.len() != self.p || pair.v.len() != self.p {
            return Err(Error::shape(
                format!("factor length {}", self.p),
                format!("({}, {})", pair.u.len(), pair.v.len()),
            ));
        }
        if pair.u.len() != pair.v.len() {
            return Err(Error::shape(pair.u.len(), pair.v.len()));
        }
        if self.symmetric && pair.u != pair.v {
            return Err(Error::Parameter(
                "symmetric factored matrix requires u == v".into(),
            ));
        }
        self.pairs.push(pair);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    #[inline]
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn pairs(&self) -> &[FactorPair<S>] {
        &self.pairs
    }

    /// Mutable access for in-place updates. Callers keep the symmetric invariant.
    pub(crate) fn pairs_mut(&mut self) -> &mut Vec<FactorPair<S>> {
        &mut self.pairs
    }

    pub fn into_pairs(self) -> Vec<FactorPair<S>> {
        self.pairs
    }

    /// `U = [u_1 … u_r]`, a `p × r` matrix.
    pub fn u_stack(&self) -> Array2<S> {
        stack(self.p, self.pairs.iter().map(|q| q.u.view()))
    }

    /// `V = [v_1 … v_r]`.
    pub fn v_stack(&self) -> Array2<S> {
        stack(self.p, self.pairs.iter().map(|q| q.v.view()))
    }

    /// Dense `Σ u_k v_kᵀ`; intended for small `p` (tests, diagnostics).
    pub fn to_dense(&self) -> Array2<S> {
        self.u_stack().dot(&self.v_stack().t())
    }

    /// Multiplies every factor by `c`, so the matrix scales by `c²`.
    pub fn scaled(&self, c: S) -> Self {
        let pairs = self
            .pairs
            .iter()
            .map(|q| FactorPair {
                u: &q.u * c,
                v: &q.v * c,
            })
            .collect();
        FactoredMatrix {
            pairs,
            p: self.p,
            symmetric: self.symmetric,
        }
    }

    /// `Σ_k ‖u_k‖₂²`; equals the trace of `B` in symmetric mode.
    pub fn trace_sym(&self) -> S {
        self.pairs.iter().map(|q| q.u.dot(&q.v)).sum()
    }
}

fn stack<'a, S: Scalar>(p: usize, cols: impl Iterator<Item = ArrayView1<'a, S>>) -> Array2<S> {
    let cols: Vec<_> = cols.collect();
    let mut out = Array2::zeros((p, cols.len()));
    for (k, c) in cols.into_iter().enumerate() {
        out.column_mut(k).assign(&c);
    }
    out
}
