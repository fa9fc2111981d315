//! Model subspaces at `B = β βᵀ`.
//!
//! * `I`: matrices supported on `supp(β) × supp(β)`.
//! * `T = { x βᵀ + β yᵀ }`, with `P_T(A) = QA + AQ − QAQ` where `Q = b bᵀ`,
//!   `b = β/‖β‖₂`, and `P_{T⊥}(A) = (1−Q) A (1−Q)`.
//!
//! Since `b` lives on the support, `P_T` and `P_I` commute and projections
//! onto intersections are products.

use std::str::FromStr;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelSubspace {
    I,
    IPerp,
    T,
    TPerp,
    TAndI,
    TAndIPerp,
    TPerpAndI,
    TPerpAndIPerp,
    /// `span{β βᵀ}`.
    Beta,
    /// Orthogonal complement of `span{β βᵀ}`.
    BetaPerp,
}

impl ModelSubspace {
    pub const ALL: [ModelSubspace; 10] = [
        ModelSubspace::I,
        ModelSubspace::IPerp,
        ModelSubspace::T,
        ModelSubspace::TPerp,
        ModelSubspace::TAndI,
        ModelSubspace::TAndIPerp,
        ModelSubspace::TPerpAndI,
        ModelSubspace::TPerpAndIPerp,
        ModelSubspace::Beta,
        ModelSubspace::BetaPerp,
    ];
}

impl FromStr for ModelSubspace {
    type Err = Error;

    fn from_str(tag: &str) -> Result<Self> {
        let t = tag.replace(' ', "").to_ascii_lowercase();
        Ok(match t.as_str() {
            "i" => ModelSubspace::I,
            "i_perp" | "iperp" | "i⊥" => ModelSubspace::IPerp,
            "t" => ModelSubspace::T,
            "t_perp" | "tperp" | "t⊥" => ModelSubspace::TPerp,
            "t∩i" | "t_and_i" => ModelSubspace::TAndI,
            "t∩i⊥" | "t_and_i_perp" => ModelSubspace::TAndIPerp,
            "t⊥∩i" | "t_perp_and_i" => ModelSubspace::TPerpAndI,
            "t⊥∩i⊥" | "t_perp_and_i_perp" => ModelSubspace::TPerpAndIPerp,
            "β" | "beta" => ModelSubspace::Beta,
            "β⊥" | "beta_perp" => ModelSubspace::BetaPerp,
            _ => return Err(Error::Parameter(format!("unknown model subspace `{tag}`"))),
        })
    }
}

/// Precomputed unit direction and support of `β`.
#[derive(Debug, Clone)]
pub struct ModelSpaces<S> {
    unit: Array1<S>,
    on_support: Vec<bool>,
}

impl<S: Scalar> ModelSpaces<S> {
    pub fn new(beta: &Array1<S>) -> Result<Self> {
        let nb = norm2(beta.view());
        if nb == S::zero() {
            return Err(Error::Degenerate("β must be nonzero".into()));
        }
        Ok(ModelSpaces {
            unit: beta.mapv(|x| x / nb),
            on_support: beta.iter().map(|x| *x != S::zero()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    pub fn on_support(&self, i: usize) -> bool {
        self.on_support[i]
    }

    /// `P_I` on vectors: zero the off-support coordinates.
    pub fn restrict_to_support(&self, z: &Array1<S>) -> Array1<S> {
        Array1::from_iter(
            z.iter()
                .zip(&self.on_support)
                .map(|(v, on)| if *on { *v } else { S::zero() }),
        )
    }

    fn mask(&self, a: &Array2<S>, inside: bool) -> Array2<S> {
        Array2::from_shape_fn(a.dim(), |(i, j)| {
            if (self.on_support[i] && self.on_support[j]) == inside {
                a[[i, j]]
            } else {
                S::zero()
            }
        })
    }

    fn proj_t(&self, a: &Array2<S>) -> Array2<S> {
        // QA + AQ − QAQ with Q = b bᵀ, without forming Q.
        let b = &self.unit;
        let ab = a.dot(b); // A b
        let atb = a.t().dot(b); // Aᵀ b
        let bab = b.dot(&ab);
        Array2::from_shape_fn(a.dim(), |(i, j)| {
            b[i] * atb[j] + ab[i] * b[j] - bab * b[i] * b[j]
        })
    }

    fn proj_beta(&self, a: &Array2<S>) -> Array2<S> {
        let b = &self.unit;
        let bab = b.dot(&a.dot(b));
        Array2::from_shape_fn(a.dim(), |(i, j)| bab * b[i] * b[j])
    }

    pub fn project(&self, a: &Array2<S>, subspace: ModelSubspace) -> Result<Array2<S>> {
        let p = self.dim();
        if a.dim() != (p, p) {
            return Err(Error::shape(format!("({p}, {p})"), format!("{:?}", a.dim())));
        }
        Ok(match subspace {
            ModelSubspace::I => self.mask(a, true),
            ModelSubspace::IPerp => self.mask(a, false),
            ModelSubspace::T => self.proj_t(a),
            ModelSubspace::TPerp => a - &self.proj_t(a),
            ModelSubspace::TAndI => self.proj_t(&self.mask(a, true)),
            ModelSubspace::TAndIPerp => self.proj_t(&self.mask(a, false)),
            ModelSubspace::TPerpAndI => {
                let ai = self.mask(a, true);
                &ai - &self.proj_t(&ai)
            }
            ModelSubspace::TPerpAndIPerp => {
                let ai = self.mask(a, false);
                &ai - &self.proj_t(&ai)
            }
            ModelSubspace::Beta => self.proj_beta(a),
            ModelSubspace::BetaPerp => a - &self.proj_beta(a),
        })
    }
}

/// Orthogonal (Hilbert-Schmidt) projection of `a` onto a model subspace at
/// `β βᵀ`. Support membership uses an exact zero test.
pub fn project_model_space<S: Scalar>(
    beta: &Array1<S>,
    a: &Array2<S>,
    subspace: ModelSubspace,
) -> Result<Array2<S>> {
    ModelSpaces::new(beta)?.project(a, subspace)
}
