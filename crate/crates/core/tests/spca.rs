mod common;

use common::{gaussian_mat, gaussian_vec, rng, theta, to_na_mat, top_eigen};
use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2};
use rand::Rng as _;
use sparselift::spca::{
    empirical_covariance, sample_spiked, spca_objective, spca_solve, spca_stationarity_check, SpcaConfig,
    SpikedModel,
};
use sparselift::{FactorPair, FactoredMatrix, Sparsity};

fn sp(s: f64) -> Sparsity<f64> {
    Sparsity::new(s).unwrap()
}

fn from_na(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

/// Symmetric matrix with eigenvalues `vals` in a random orthonormal basis.
fn with_spectrum(r: &mut rand_chacha::ChaCha8Rng, vals: &[f64]) -> Array2<f64> {
    let p = vals.len();
    let q = to_na_mat(&gaussian_mat(r, p, p)).qr().q();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(vals));
    let m = &q * d * q.transpose();
    from_na(&((&m + m.transpose()) * 0.5))
}

fn op_norm(a: &Array2<f64>) -> f64 {
    let e = SymmetricEigen::new(to_na_mat(a));
    e.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

#[test]
fn objective_matches_dense() {
    let mut r = rng(4);
    for _ in 0..50 {
        let p = r.random_range(1..=12);
        let rank = r.random_range(0..=3);
        let g = gaussian_mat(&mut r, p, p);
        let sigma = (&g + &g.t()) * 0.5;
        let mut pairs: Vec<_> = (0..rank).map(|_| gaussian_vec(&mut r, p)).collect();
        let tr: f64 = pairs.iter().map(|u| u.dot(u)).sum();
        if tr > 0.0 {
            let c = (r.random_range(0.1..1.0) / tr).sqrt();
            pairs.iter_mut().for_each(|u| *u *= c);
        }
        let (lambda, s) = (r.random_range(0.0..1.0), r.random_range(1..=p) as f64);
        let f = FactoredMatrix::from_pairs(p, true, pairs.iter().cloned().map(FactorPair::symmetric).collect()).unwrap();
        let dense_p: DMatrix<f64> = common::dense_lifted(&f);
        let explained = (to_na_mat(&sigma).component_mul(&dense_p)).sum();
        let charge: f64 = pairs.iter().map(|u| theta(u, u, s)).sum();
        let want = -explained + lambda * charge;
        let got = spca_objective(&f, &sigma, lambda, &sp(s)).unwrap();
        assert!((got - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }
}

#[test]
fn zero_lambda_aligns_with_leading_eigenvector() {
    let mut r = rng(8);
    for p in [10, 30, 50] {
        let mut vals: Vec<f64> = (0..p).map(|i| 1.0 - 0.5 * i as f64 / p as f64).collect();
        vals[0] = 3.0;
        let sigma = with_spectrum(&mut r, &vals);
        let mut cfg = SpcaConfig::new(0.0, sp(p as f64));
        cfg.max_rank = 1;
        cfg.max_iters = 5000;
        let out = spca_solve(&sigma, &cfg).unwrap();
        let lead = out.leading_direction().unwrap();
        let (_, vecs) = top_eigen(&to_na_mat(&sigma));
        let v = Array1::from_iter(vecs.column(0).iter().copied());
        let align = lead.dot(&v).abs() / lead.dot(&lead).sqrt();
        assert!(align >= 0.99, "p = {p}: alignment {align}");
    }
}

#[test]
fn stationarity_at_zero_lambda_matches_eigen_oracle() {
    let mut r = rng(12);
    let p = 8;
    let vals: Vec<f64> = (0..p).map(|i| 4.0 - i as f64 * 0.4).collect();
    let sigma = with_spectrum(&mut r, &vals);
    let (ev, vecs) = top_eigen(&to_na_mat(&sigma));
    let v = Array1::from_iter(vecs.column(0).iter().copied());
    let f = FactoredMatrix::from_pairs(p, true, vec![FactorPair::symmetric(v)]).unwrap();
    let s = sp(2.0);
    let rep = spca_stationarity_check(&f, &sigma, 0.0, &s, &[]).unwrap();
    let max_diag = (0..p).map(|i| sigma[[i, i]]).fold(f64::NEG_INFINITY, f64::max);
    assert!((rep.scaled_violation - (max_diag - ev[0])).abs() < 1e-12);
    assert!(rep.scaled_holds());
    let unit = s.unit_atom_gauge();
    assert!((rep.literal_violation - (max_diag - ev[0] - unit)).abs() < 1e-12);
    let again = spca_stationarity_check(&f, &sigma, 0.0, &s, &[]).unwrap();
    assert_eq!(again.scaled_violation, rep.scaled_violation);
    let zero = spca_stationarity_check(&FactoredMatrix::empty(p, true), &Array2::zeros((p, p)), 0.3, &s, &[(0, 1)]).unwrap();
    assert!(zero.literal_holds() && zero.scaled_holds());
    assert_eq!(zero.directions_checked, p + 2);
}

#[test]
fn covariance_converges_with_n() {
    let base = SpikedModel::<f64>::random(20, 3, 10, 2.0, 1.0, 6).unwrap();
    let truth = base.covariance();
    let mut errs = Vec::new();
    for n in [100, 1000, 10_000] {
        let model = SpikedModel::new(n, 2.0, 1.0, base.v1.clone(), base.mu.clone()).unwrap();
        let cov = empirical_covariance(sample_spiked(&model, 99).view()).unwrap().sigma_hat;
        errs.push(op_norm(&(&cov - &truth)));
        if n == 10_000 {
            let along = base.v1.dot(&cov.dot(&base.v1));
            assert!((along - 2.0).abs() < 0.1, "⟨Σ̂, v v⟩ = {along}");
        }
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn solver_keeps_trace_feasible_and_objective_monotone() {
    for seed in 0..5 {
        let model = SpikedModel::<f64>::random(40, 4, 60, 2.0, 1.0, seed).unwrap();
        let cov = empirical_covariance(sample_spiked(&model, seed + 100).view()).unwrap().sigma_hat;
        let out = spca_solve(&cov, &SpcaConfig::new(0.05, sp(4.0))).unwrap();
        assert!(out.diagnostics.experimental);
        assert!(out.diagnostics.max_trace() <= 1.0 + 1e-10);
        assert!(out.diagnostics.max_increase() <= 1e-10);
        assert!(out.diagnostics.history.iter().all(|h| h.feasibility <= 1.0 + 1e-10));
    }
    let zero = spca_solve(&Array2::<f64>::zeros((5, 5)), &SpcaConfig::new(0.1, sp(2.0))).unwrap();
    assert!(zero.factors.is_empty() && zero.objective == 0.0);
}
