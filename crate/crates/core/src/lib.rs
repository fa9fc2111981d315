//! Sparse phase retrieval through a mixed sparse/low-rank atomic matrix norm.
//!
//! The crate is organised around the lifted least-squares estimator
//!
//! ```text
//! min_B  (1/2n) Σ (y_i - <x_i x_iᵀ, B>)²  +  λ ‖B‖_{Θ,s}
//! ```
//!
//! optimised in factored form `B = Σ u_k v_kᵀ`, where each rank-one term is
//! charged `θ_s(u, v) = g(u) g(v)` with `g(z) = ‖z‖₂ + ‖z‖₁/√s`.
//!
//! * [`atomic_norm`]: the factor gauge, atomic decompositions, subgradients and
//!   the closed-form proximal operator.
//! * [`model`]: synthetic ground truth, Gaussian designs, noise models and the
//!   factored measurement operator.
//! * [`solver`]: alternating accelerated proximal gradient, rebalancing,
//!   stationarity and 1-sparse dual-certificate checks, atom addition.
//! * [`spca`]: an experimental sparse PCA variant on the trace ball.
//! * [`bench`]: phase-transition grids, sparsity sweeps, scaling fits, CLI.
//!
//! Numerical code is generic over [`Scalar`] (`f32` and `f64`); the `*64`
//! aliases below pin the common double-precision instantiation.

pub mod atomic_norm;
pub mod bench;
pub mod error;
pub mod factored;
pub mod linalg;
pub mod model;
pub mod rng;
pub mod scalar;
pub mod solver;
pub mod spca;

pub use error::{Error, Result};
pub use factored::{FactorPair, FactoredMatrix};
pub use scalar::{Scalar, Sparsity};

pub type FactorPair64 = FactorPair<f64>;
pub type FactoredMatrix64 = FactoredMatrix<f64>;
pub type Sparsity64 = Sparsity<f64>;
pub type ProblemInstance64 = model::ProblemInstance<f64>;
pub type GroundTruth64 = model::GroundTruth<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SolveOutput64 = solver::SolveOutput<f64>;

pub type FactoredMatrix32 = FactoredMatrix<f32>;
pub type ProblemInstance32 = model::ProblemInstance<f32>;
pub type SolverConfig32 = solver::SolverConfig<f32>;
