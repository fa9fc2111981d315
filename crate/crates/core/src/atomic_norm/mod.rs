//! The mixed sparse/low-rank atomic norm.
//!
//! For a rank-one term the charge is `θ_s(u, v) = g(u) g(v)` with the factor
//! gauge `g(z) = ‖z‖₂ + ‖z‖₁/√s`; the norm of a matrix is the infimum of
//! `Σ θ_s(u_k, v_k)` over all factorizations. No routine here evaluates that
//! infimum. [`factorization_value`] and the coefficient sum of
//! [`atomic_decompose`] are upper bounds only.

mod decompose;
mod gauge;
mod projection;
mod prox;
mod subgradient;

pub use decompose::{atomic_decompose, sparse_split, Atom};
pub use gauge::{factor_gauge, factorization_value, theta, theta_s};
pub use projection::{project_model_space, ModelSpaces, ModelSubspace};
pub use prox::{prox_gauge_squared, prox_l2_l1, prox_l2_l1_objective, prox_shrink, soft_threshold};
pub use subgradient::{
    check_subgradient, subgradient_basic, subgradient_combination, subgradient_family, w_beta,
    SamplePairs, SubgradientCheck, SubgradientFamily, SubgradientSpec, FAMILY3_SAMPLES,
    FAMILY3_SEED,
};
