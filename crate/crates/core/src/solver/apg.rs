//! Monotone accelerated proximal gradient with backtracking.
//!
//! FISTA momentum; the step starts at a supplied estimate and shrinks by the
//! backtracking factor until the quadratic upper bound holds at the trial
//! point. If a step raises the composite objective the momentum is dropped
//! and the step is retried from the last accepted iterate, which makes the
//! accepted sequence monotone.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) trait CompositeProblem<S: Scalar> {
    fn smooth(&self, x: &Array2<S>) -> S;
    fn smooth_grad(&self, x: &Array2<S>) -> (S, Array2<S>);
    fn nonsmooth(&self, x: &Array2<S>) -> S;
    fn prox(&self, z: &Array2<S>, step: S) -> Result<Array2<S>>;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct ApgOptions<S> {
    pub initial_step: S,
    pub backtrack: S,
    pub max_iters: usize,
    pub rel_tol: S,
}

#[derive(Debug, Clone)]
pub(crate) struct ApgResult<S> {
    pub x: Array2<S>,
    pub objective: S,
    pub initial_objective: S,
    pub iterations: usize,
    /// Step in force at exit.
    pub step: S,
}

const MAX_BACKTRACKS: usize = 200;

pub(crate) fn apg<S: Scalar, P: CompositeProblem<S>>(
    problem: &P,
    x0: Array2<S>,
    opts: ApgOptions<S>,
) -> Result<ApgResult<S>> {
    let mut x = x0;
    let mut fx = problem.smooth(&x) + problem.nonsmooth(&x);
    let initial_objective = fx;
    if !fx.is_finite() {
        return Err(Error::Numerical {
            message: "non-finite objective at inner start".into(),
            diagnostics: format!("objective = {fx}"),
        });
    }
    let mut y = x.clone();
    let mut momentum_active = false;
    let mut t = S::one();
    let mut step = opts.initial_step;
    let half = S::lit(0.5);
    let mut iterations = 0;

    while iterations < opts.max_iters {
        iterations += 1;
        let (f_y, g_y) = problem.smooth_grad(&y);
        if !f_y.is_finite() || g_y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical {
                message: "non-finite gradient in inner solve".into(),
                diagnostics: format!(
                    "iteration = {iterations}, step = {step}, smooth = {f_y}, last objective = {fx}"
                ),
            });
        }
        let slack = S::lit(16.0) * S::epsilon() * (f_y.abs() + S::one());
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let z = problem.prox(&(&y - &(&g_y * step)), step)?;
            let d = &z - &y;
            let f_z = problem.smooth(&z);
            let bound = f_y + (&g_y * &d).sum() + d.iter().map(|v| *v * *v).sum::<S>() * half / step;
            if f_z.is_finite() && f_z <= bound + slack {
                accepted = Some((z, f_z));
                break;
            }
            step = step * opts.backtrack;
        }
        let Some((z, f_z)) = accepted else {
            break;
        };
        let fz = f_z + problem.nonsmooth(&z);
        if !(fz <= fx) {
            if momentum_active {
                y = x.clone();
                t = S::one();
                momentum_active = false;
                continue;
            }
            // A plain proximal step failed to decrease: no further progress
            // is resolvable at this precision.
            break;
        }
        let rel = (fx - fz) / fx.abs().max(S::min_positive_value());
        let t_next = (S::one() + (S::one() + S::lit(4.0) * t * t).sqrt()) * half;
        let beta = (t - S::one()) / t_next;
        y = &z + &((&z - &x) * beta);
        momentum_active = beta > S::zero();
        x = z;
        fx = fz;
        t = t_next;
        if rel < opts.rel_tol {
            break;
        }
    }
    Ok(ApgResult {
        x,
        objective: fx,
        initial_objective,
        iterations,
        step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    /// ½‖x − c‖² + μ‖x‖₁ has the soft-threshold of `c` as minimiser.
    struct Lasso {
        c: Array2<f64>,
        mu: f64,
    }

    impl CompositeProblem<f64> for Lasso {
        fn smooth(&self, x: &Array2<f64>) -> f64 {
            0.5 * (x - &self.c).mapv(|v| v * v).sum()
        }
        fn smooth_grad(&self, x: &Array2<f64>) -> (f64, Array2<f64>) {
            (self.smooth(x), x - &self.c)
        }
        fn nonsmooth(&self, x: &Array2<f64>) -> f64 {
            self.mu * x.mapv(f64::abs).sum()
        }
        fn prox(&self, z: &Array2<f64>, step: f64) -> Result<Array2<f64>> {
            let t = step * self.mu;
            Ok(z.mapv(|v| (v.abs() - t).max(0.0).copysign(v)))
        }
    }

    #[test]
    fn converges_and_is_monotone_from_large_step() {
        let prob = Lasso {
            c: array![[3.0, -0.5], [0.2, -2.0]],
            mu: 1.0,
        };
        let res = apg(
            &prob,
            Array2::zeros((2, 2)),
            ApgOptions {
                initial_step: 50.0,
                backtrack: 0.5,
                max_iters: 500,
                rel_tol: 1e-14,
            },
        )
        .unwrap();
        let expect = array![[2.0, 0.0], [0.0, -1.0]];
        for (a, b) in res.x.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(res.objective <= res.initial_objective);
    }
}
