//! Block subproblems of the factored objective.
//!
//! With `V` fixed the objective is convex in `U`:
//! `(1/2n) Σ_i (y_i − Σ_k ⟨x_i,u_k⟩⟨x_i,v_k⟩)² + λ Σ_k g(v_k) g(u_k)`.
//! The proximal step acts column by column through the closed-form
//! ℓ2+ℓ1 prox with weights `tλg(v_k)` and `tλg(v_k)/√s`.
//!
//! In symmetric mode the shared factor is updated jointly on
//! `(1/2n) Σ_i (y_i − Σ_k ⟨x_i,u_k⟩²)² + λ Σ_k g(u_k)²`, whose prox is
//! [`prox_gauge_squared`].

use ndarray::{Array1, Array2, ArrayView2, Axis, Zip};

use super::apg::{apg, ApgOptions, CompositeProblem};
use super::config::SolverConfig;
use crate::atomic_norm::{factor_gauge, prox_gauge_squared};
use crate::atomic_norm::prox_shrink;
use crate::error::{Error, Result};
use crate::factored::FactoredMatrix;
use crate::linalg::row_sparse_product;
use crate::model::ProblemInstance;
use crate::scalar::{Scalar, Sparsity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    U,
    V,
}

#[derive(Debug, Clone)]
pub struct InnerOutcome<S> {
    pub factors: FactoredMatrix<S>,
    pub iterations: usize,
    pub objective_before: S,
    pub objective_after: S,
    /// Last accepted proximal step; a good start for the next block solve.
    pub step: S,
}

/// Row-wise `Σ_k a_ik b_ik`.
fn row_dot<S: Scalar>(a: &Array2<S>, b: &Array2<S>) -> Array1<S> {
    (a * b).sum_axis(Axis(1))
}

fn col_scale<S: Scalar>(w: &Array1<S>, m: &Array2<S>) -> Array2<S> {
    let mut out = m.clone();
    Zip::from(out.rows_mut()).and(w).for_each(|mut row, &wi| row.mapv_inplace(|v| v * wi));
    out
}

/// The linear measurement map `D ↦ (Σ_k (A D)_ik M_ik)_i` for a weight
/// matrix `M = weights` (`n × r`).
struct LinearPart<'a, S> {
    design: ArrayView2<'a, S>,
    weights: Array2<S>,
    inv_n: S,
}

impl<S: Scalar> LinearPart<'_, S> {
    fn forward(&self, d: &Array2<S>) -> Array1<S> {
        row_dot(&row_sparse_product(self.design, d), &self.weights)
    }

    fn adjoint(&self, w: &Array1<S>) -> Array2<S> {
        self.design.t().dot(&col_scale(w, &self.weights))
    }

    /// Estimate of `‖𝒜‖²/n` from 20 power iterations on `𝒜*𝒜/n`.
    fn lipschitz_estimate(&self, p: usize) -> S {
        let r = self.weights.ncols();
        let mut d = Array2::from_elem((p, r), S::one());
        let mut est = S::zero();
        for _ in 0..20 {
            let nd = d.iter().map(|v| *v * *v).sum::<S>().sqrt();
            if nd == S::zero() || !nd.is_finite() {
                return S::zero();
            }
            d.mapv_inplace(|v| v / nd);
            let next = self.adjoint(&self.forward(&d)) * self.inv_n;
            est = (&next * &d).sum();
            d = next;
        }
        est
    }
}

struct HalfProblem<'a, S> {
    lin: LinearPart<'a, S>,
    y: &'a Array1<S>,
    fixed_gauge: Vec<S>,
    lambda: S,
    s: Sparsity<S>,
}

impl<S: Scalar> CompositeProblem<S> for HalfProblem<'_, S> {
    fn smooth(&self, x: &Array2<S>) -> S {
        let r = self.y - &self.lin.forward(x);
        r.dot(&r) * self.lin.inv_n * S::lit(0.5)
    }

    fn smooth_grad(&self, x: &Array2<S>) -> (S, Array2<S>) {
        let r = self.y - &self.lin.forward(x);
        let f = r.dot(&r) * self.lin.inv_n * S::lit(0.5);
        let g = self.lin.adjoint(&r) * (-self.lin.inv_n);
        (f, g)
    }

    fn nonsmooth(&self, x: &Array2<S>) -> S {
        x.columns()
            .into_iter()
            .zip(&self.fixed_gauge)
            .map(|(c, g)| *g * factor_gauge(c, &self.s))
            .sum::<S>()
            * self.lambda
    }

    fn prox(&self, z: &Array2<S>, step: S) -> Result<Array2<S>> {
        let mut out = Array2::zeros(z.dim());
        for ((mut o, c), g) in out.columns_mut().into_iter().zip(z.columns()).zip(&self.fixed_gauge) {
            if *g == S::zero() {
                continue;
            }
            let a = step * self.lambda * *g;
            o.assign(&prox_shrink(c, a, a * self.s.inv_sqrt()));
        }
        Ok(out)
    }
}

struct SymmetricProblem<'a, S> {
    design: ArrayView2<'a, S>,
    y: &'a Array1<S>,
    inv_n: S,
    lambda: S,
    s: Sparsity<S>,
}

impl<S: Scalar> CompositeProblem<S> for SymmetricProblem<'_, S> {
    fn smooth(&self, x: &Array2<S>) -> S {
        let xu = row_sparse_product(self.design, x);
        let r = self.y - &row_dot(&xu, &xu);
        r.dot(&r) * self.inv_n * S::lit(0.5)
    }

    fn smooth_grad(&self, x: &Array2<S>) -> (S, Array2<S>) {
        let xu = row_sparse_product(self.design, x);
        let r = self.y - &row_dot(&xu, &xu);
        let f = r.dot(&r) * self.inv_n * S::lit(0.5);
        let g = self.design.t().dot(&col_scale(&r, &xu)) * (-S::lit(2.0) * self.inv_n);
        (f, g)
    }

    fn nonsmooth(&self, x: &Array2<S>) -> S {
        x.columns()
            .into_iter()
            .map(|c| factor_gauge(c, &self.s).powi(2))
            .sum::<S>()
            * self.lambda
    }

    fn prox(&self, z: &Array2<S>, step: S) -> Result<Array2<S>> {
        let mut out = Array2::zeros(z.dim());
        for (mut o, c) in out.columns_mut().into_iter().zip(z.columns()) {
            o.assign(&prox_gauge_squared(c, step * self.lambda, &self.s)?);
        }
        Ok(out)
    }
}

fn initial_step<S: Scalar>(lipschitz: S) -> S {
    if lipschitz > S::zero() && lipschitz.is_finite() {
        S::one() / lipschitz
    } else {
        S::one()
    }
}

/// Minimises the factored objective over one side with the other fixed.
///
/// In symmetric mode `side` is ignored and the shared factor is updated.
/// The returned objective never exceeds the input objective. The first
/// step is `1/L̂`, with `L̂` from 20 power iterations on the data quadratic.
pub fn inner_minimize<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
    side: Side,
) -> Result<InnerOutcome<S>> {
    inner_minimize_from(inst, f, cfg, side, None)
}

/// As [`inner_minimize`], but starting the step search from `step_hint`
/// (the step of a previous solve of the same block) when given, which
/// skips the power iteration. Backtracking still guards every step.
pub(crate) fn inner_minimize_from<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
    side: Side,
    step_hint: Option<S>,
) -> Result<InnerOutcome<S>> {
    if f.dim() != inst.p() {
        return Err(Error::shape(inst.p(), f.dim()));
    }
    let inv_n = S::one() / S::from_usize(inst.n()).expect("n fits scalar");
    let opts = |step| ApgOptions {
        initial_step: step,
        backtrack: cfg.backtrack_factor,
        max_iters: cfg.max_inner_iters,
        rel_tol: cfg.inner_tol,
    };
    if f.is_empty() {
        let obj = super::objective::objective(inst, f, cfg)?;
        return Ok(InnerOutcome {
            factors: f.clone(),
            iterations: 0,
            objective_before: obj,
            objective_after: obj,
            step: step_hint.unwrap_or(S::one()),
        });
    }

    if f.is_symmetric() {
        let u = f.u_stack();
        let problem = SymmetricProblem {
            design: inst.design.view(),
            y: &inst.observations,
            inv_n,
            lambda: cfg.lambda,
            s: cfg.s,
        };
        let gn = LinearPart {
            design: inst.design.view(),
            weights: inst.design.dot(&u) * S::lit(2.0),
            inv_n,
        };
        let step = step_hint.unwrap_or_else(|| initial_step(gn.lipschitz_estimate(inst.p())));
        let res = apg(&problem, u, opts(step))?;
        return Ok(InnerOutcome {
            factors: FactoredMatrix::from_stacks(&res.x, &res.x, true)?,
            iterations: res.iterations,
            objective_before: res.initial_objective,
            objective_after: res.objective,
            step: res.step,
        });
    }

    let (free, fixed) = match side {
        Side::U => (f.u_stack(), f.v_stack()),
        Side::V => (f.v_stack(), f.u_stack()),
    };
    let fixed_gauge = fixed.columns().into_iter().map(|c| factor_gauge(c, &cfg.s)).collect();
    let problem = HalfProblem {
        lin: LinearPart {
            design: inst.design.view(),
            weights: inst.design.dot(&fixed),
            inv_n,
        },
        y: &inst.observations,
        fixed_gauge,
        lambda: cfg.lambda,
        s: cfg.s,
    };
    let step = step_hint.unwrap_or_else(|| initial_step(problem.lin.lipschitz_estimate(inst.p())));
    // Columns paired with a zero fixed factor carry no data term; the prox
    // zeroes them on the first step.
    let res = apg(&problem, free, opts(step))?;
    let factors = match side {
        Side::U => FactoredMatrix::from_stacks(&res.x, &fixed, false)?,
        Side::V => FactoredMatrix::from_stacks(&fixed, &res.x, false)?,
    };
    Ok(InnerOutcome {
        factors,
        iterations: res.iterations,
        objective_before: res.initial_objective,
        objective_after: res.objective,
        step: res.step,
    })
}
