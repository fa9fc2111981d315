use ndarray::Array1;

use super::config::SolverConfig;
use crate::atomic_norm::factorization_value;
use crate::error::Result;
use crate::factored::FactoredMatrix;
use crate::model::{lifted_predictions, ProblemInstance};
use crate::scalar::Scalar;

/// `r_i = y_i − ⟨x_i x_iᵀ, B⟩`.
pub fn residuals<S: Scalar>(inst: &ProblemInstance<S>, f: &FactoredMatrix<S>) -> Result<Array1<S>> {
    let pred = lifted_predictions(inst.design.view(), f)?;
    Ok(&inst.observations - &pred)
}

pub(crate) fn data_term<S: Scalar>(r: &Array1<S>, n: usize) -> S {
    r.dot(r) / (S::lit(2.0) * S::from_usize(n).expect("n fits scalar"))
}

/// `(1/2n) Σ r_i² + λ Σ_k θ_s(u_k, v_k)`.
pub fn objective<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<S> {
    let r = residuals(inst, f)?;
    Ok(data_term(&r, inst.n()) + cfg.lambda * factorization_value(f, &cfg.s))
}
