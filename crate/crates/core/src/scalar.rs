use std::iter::Sum;

use ndarray::NdFloat;
use num_traits::FromPrimitive;

use crate::error::{Error, Result};

/// Floating-point scalar the numerical core is generic over.
pub trait Scalar: NdFloat + FromPrimitive + Default + Sum {
    /// Converts an `f64` literal; every constant in the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sparsity parameter `s > 0` of the mixed norm.
///
/// It enters the gauge only through `1/√s`, so non-integer values are allowed.
/// Operations that chunk vectors into `s`-sparse blocks require an integer
/// value and call [`Sparsity::block_len`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sparsity<S> {
    value: S,
    inv_sqrt: S,
}

impl<S: Scalar> Sparsity<S> {
    pub fn new(s: S) -> Result<Self> {
        if !(s > S::zero()) || !s.is_finite() {
            return Err(Error::Parameter(format!(
                "sparsity must be positive and finite, got {s}"
            )));
        }
        Ok(Sparsity {
            value: s,
            inv_sqrt: S::one() / s.sqrt(),
        })
    }

    pub fn from_usize(s: usize) -> Result<Self> {
        Self::new(S::from_usize(s).unwrap_or_else(S::zero))
    }

    #[inline]
    pub fn value(&self) -> S {
        self.value
    }

    /// `1/√s`.
    #[inline]
    pub fn inv_sqrt(&self) -> S {
        self.inv_sqrt
    }

    /// `(1 + 1/√s)²`, the gauge of a 1-sparse unit atom `e_i e_jᵀ`.
    #[inline]
    pub fn unit_atom_gauge(&self) -> S {
        let g = S::one() + self.inv_sqrt;
        g * g
    }

    /// Integer block length for sparse splitting.
    pub fn block_len(&self) -> Result<usize> {
        let v = self.value.to_f64_lossy();
        if v < 1.0 || v.fract() != 0.0 {
            return Err(Error::Parameter(format!(
                "integer sparsity >= 1 required, got {v}"
            )));
        }
        Ok(v as usize)
    }
}
