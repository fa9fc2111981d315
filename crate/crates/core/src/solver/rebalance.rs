use ndarray::{Array1, Axis};

use super::config::SolverConfig;
use super::objective::residuals;
use crate::atomic_norm::factor_gauge;
use crate::error::Result;
use crate::factored::{FactorPair, FactoredMatrix};
use crate::model::ProblemInstance;
use crate::scalar::{Scalar, Sparsity};

/// Rescales every pair so that `g(u_k) = g(v_k)` while keeping `u_k v_kᵀ`;
/// pairs with a zero factor are dropped.
pub fn rebalance<S: Scalar>(f: &FactoredMatrix<S>, s: &Sparsity<S>) -> FactoredMatrix<S> {
    let mut out = FactoredMatrix::empty(f.dim(), f.is_symmetric());
    for q in f.pairs() {
        let gu = factor_gauge(q.u.view(), s);
        let gv = factor_gauge(q.v.view(), s);
        if gu == S::zero() || gv == S::zero() {
            continue;
        }
        let pair = if f.is_symmetric() {
            q.clone()
        } else {
            let cu = (gv / gu).sqrt();
            FactorPair {
                u: &q.u * cu,
                v: &q.v * (S::one() / cu),
            }
        };
        out.pairs_mut().push(pair);
    }
    out
}

/// Per-pair terms `a_k,i = ⟨x_i,u_k⟩⟨x_i,v_k⟩` as the columns of an `n × r` matrix.
fn pair_measurements<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
) -> ndarray::Array2<S> {
    let xu = inst.design.dot(&f.u_stack());
    if f.is_symmetric() {
        &xu * &xu
    } else {
        &xu * &inst.design.dot(&f.v_stack())
    }
}

/// Condition (a) residual of every pair:
/// `(1/n) Σ_i r_i ⟨x_i,u_k⟩⟨x_i,v_k⟩ − λ θ_s(u_k, v_k)`.
pub fn pair_stationarity<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<Vec<(S, S)>> {
    if f.is_empty() {
        return Ok(Vec::new());
    }
    let r = residuals(inst, f)?;
    let a = pair_measurements(inst, f);
    let inv_n = S::one() / S::from_usize(inst.n()).expect("n fits scalar");
    Ok(a.axis_iter(Axis(1))
        .zip(f.pairs())
        .map(|(col, q)| {
            let corr = col.dot(&r) * inv_n;
            let reg = cfg.lambda * factor_gauge(q.u.view(), &cfg.s) * factor_gauge(q.v.view(), &cfg.s);
            (corr - reg, reg)
        })
        .collect())
}

/// `max_k |(1/n) Σ r_i⟨x_i,u_k⟩⟨x_i,v_k⟩ − λθ_k| / max(1, λθ_k)`; zero for
/// an empty factorization.
pub fn stationarity_gap<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<S> {
    Ok(pair_stationarity(inst, f, cfg)?
        .into_iter()
        .map(|(diff, reg)| diff.abs() / reg.max(S::one()))
        .fold(S::zero(), S::max))
}

/// Rescales every pair by `(u_k, v_k) ← √c_k (u_k, v_k)` with `c ≥ 0`
/// minimising the objective jointly over the scales. With `a_k` the pair's
/// measurements and `θ_k` its charge this is the nonnegative quadratic
/// `(1/2n)‖y − Σ c_k a_k‖² + λ Σ c_k θ_k`, solved by cyclic coordinate
/// descent on its `r × r` Gram matrix. Every pair left with `c_k > 0`
/// satisfies condition (a); pairs driven to zero are removed. The objective
/// never increases (the identity scaling is feasible and each coordinate
/// step is exact).
pub fn rescale_pairs<S: Scalar>(
    inst: &ProblemInstance<S>,
    f: &FactoredMatrix<S>,
    cfg: &SolverConfig<S>,
) -> Result<FactoredMatrix<S>> {
    const MAX_SWEEPS: usize = 10_000;
    if f.is_empty() {
        return Ok(f.clone());
    }
    let r = f.rank();
    let a = pair_measurements(inst, f);
    let inv_n = S::one() / S::from_usize(inst.n()).expect("n fits scalar");
    let gram = a.t().dot(&a) * inv_n;
    let theta: Array1<S> = f
        .pairs()
        .iter()
        .map(|q| factor_gauge(q.u.view(), &cfg.s) * factor_gauge(q.v.view(), &cfg.s))
        .collect();
    let b = a.t().dot(&inst.observations) * inv_n - &theta * cfg.lambda;
    let value = |c: &Array1<S>| S::lit(0.5) * c.dot(&gram.dot(c)) - b.dot(c);

    let ones = Array1::from_elem(r, S::one());
    let mut c = ones.clone();
    for _ in 0..MAX_SWEEPS {
        let mut moved = S::zero();
        for k in 0..r {
            if gram[[k, k]] <= S::zero() {
                continue;
            }
            let rest = gram.row(k).dot(&c) - gram[[k, k]] * c[k];
            let next = ((b[k] - rest) / gram[[k, k]]).max(S::zero());
            moved = moved.max((next - c[k]).abs() / c[k].abs().max(S::one()));
            c[k] = next;
        }
        if moved <= S::epsilon() {
            break;
        }
    }
    if !(value(&c) < value(&ones)) || c.iter().any(|v| !v.is_finite()) {
        return Ok(f.clone());
    }
    let pairs = f
        .pairs()
        .iter()
        .zip(&c)
        .filter(|(_, ck)| **ck > S::zero())
        .map(|(q, ck)| {
            let t = ck.sqrt();
            FactorPair {
                u: &q.u * t,
                v: &q.v * t,
            }
        })
        .collect();
    FactoredMatrix::from_pairs(f.dim(), f.is_symmetric(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn sp(s: f64) -> Sparsity<f64> {
        Sparsity::new(s).unwrap()
    }

    #[test]
    fn unbalanced_pair_becomes_unit() {
        let f = FactoredMatrix::from_pairs(
            2,
            false,
            vec![FactorPair::new(array![2.0, 0.0], array![0.5, 0.0]).unwrap()],
        )
        .unwrap();
        let g = rebalance(&f, &sp(1.0));
        assert_eq!(g.pairs()[0].u, array![1.0, 0.0]);
        assert_eq!(g.pairs()[0].v, array![1.0, 0.0]);
        assert_eq!(g.to_dense(), f.to_dense());
    }

    #[test]
    fn zero_factor_pair_removed() {
        let f = FactoredMatrix::from_pairs(
            2,
            false,
            vec![FactorPair::new(array![1.0, 0.0], array![0.0, 0.0]).unwrap()],
        )
        .unwrap();
        assert!(rebalance(&f, &sp(1.0)).is_empty());
    }

    #[test]
    fn balanced_pair_unchanged() {
        let f = FactoredMatrix::from_pairs(
            3,
            false,
            vec![FactorPair::new(array![1.0, -2.0, 0.0], array![0.0, 2.0, 1.0]).unwrap()],
        )
        .unwrap();
        let g = rebalance(&f, &sp(2.0));
        for (a, b) in g.pairs()[0].u.iter().zip(f.pairs()[0].u.iter()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}
