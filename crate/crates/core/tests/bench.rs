use std::process::Command;

use proptest::prelude::*;
use sparselift::bench::{
    quantile, run_phase_grid, run_sparsity_sweep, write_records, write_summary, GridConfig, LambdaRule, SweepConfig,
};
use sparselift::model::NoiseConfig;
use sparselift::solver::SolverSettings;

fn small_grid() -> GridConfig {
    GridConfig {
        p: 30,
        s_values: vec![1, 2],
        n_values: vec![40, 80],
        trials: 2,
        noise: NoiseConfig::gaussian(0.05),
        beta_norm: 1.0,
        lambda_rule: LambdaRule::Scaled(1.0),
        quantile: 0.8,
        base_seed: 7,
        solver: SolverSettings::default(),
        success_threshold: 1e-1,
        record_runtime: false,
    }
}

fn csv_bytes(cfg: &GridConfig, threads: usize) -> (Vec<u8>, Vec<u8>) {
    let out = run_phase_grid(cfg, threads).unwrap();
    let (mut rec, mut sum) = (Vec::new(), Vec::new());
    write_records(&out.records, &mut rec).unwrap();
    write_summary(&out.summary, &mut sum).unwrap();
    (rec, sum)
}

proptest! {
    #[test]
    fn quantile_matches_brute_force(values in prop::collection::vec(-100.0..100.0f64, 1..40), q in 0.01..0.99f64) {
        let t = values.len();
        // Smallest value whose empirical CDF reaches q.
        let brute = values
            .iter()
            .copied()
            .filter(|v| values.iter().filter(|w| *w <= v).count() as f64 >= q * t as f64)
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(quantile(&values, q).unwrap(), brute);
    }
}

#[test]
fn single_value_quantile_is_that_value() {
    assert_eq!(quantile(&[0.25], 0.8).unwrap(), 0.25);
}

#[test]
fn grid_csv_is_deterministic_across_runs_and_threads() {
    let cfg = small_grid();
    let a = csv_bytes(&cfg, 1);
    let b = csv_bytes(&cfg, 1);
    let c = csv_bytes(&cfg, 3);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a.0).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
}

#[test]
fn sweep_with_single_s_equals_grid_column() {
    let sweep = SweepConfig {
        p: 30,
        n: 80,
        s_values: vec![2],
        trials: 2,
        noise: NoiseConfig::gaussian(0.05),
        beta_norm: 1.0,
        lambda_rule: LambdaRule::Scaled(1.0),
        quantile: 0.8,
        base_seed: 7,
        solver: SolverSettings::default(),
        success_threshold: 1e-1,
        record_runtime: false,
    };
    let from_sweep = run_sparsity_sweep(&sweep, 1).unwrap();
    let grid = run_phase_grid(&small_grid(), 1).unwrap();
    let column: Vec<_> = grid.records.into_iter().filter(|r| r.s == 2 && r.n == 80).collect();
    assert_eq!(from_sweep.records, column);
}

#[test]
fn poisson_sweep_needs_positive_beta_norm() {
    let mut sweep = SweepConfig {
        p: 30,
        n: 80,
        s_values: vec![2],
        trials: 1,
        noise: NoiseConfig::poisson(),
        beta_norm: 0.0,
        lambda_rule: LambdaRule::Scaled(1.0),
        quantile: 0.8,
        base_seed: 0,
        solver: SolverSettings::default(),
        success_threshold: 1e-1,
        record_runtime: false,
    };
    assert!(sweep.validate().is_err());
    sweep.beta_norm = 3.0;
    assert!(sweep.validate().is_ok());
}

#[test]
fn single_easy_noiseless_cell_recovers() {
    let cfg = GridConfig {
        p: 30,
        s_values: vec![1],
        n_values: vec![100],
        trials: 1,
        noise: NoiseConfig::NONE,
        lambda_rule: LambdaRule::RelativeToMax(1e-4),
        ..small_grid()
    };
    let out = run_phase_grid(&cfg, 1).unwrap();
    assert_eq!(out.records.len(), 1);
    assert!(out.records[0].error <= 1e-2, "error {}", out.records[0].error);
    assert_eq!(out.summary[0].quantile_error, out.records[0].error);
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sparselift"))
}

#[test]
fn cli_help_and_errors() {
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
    let missing = bin().args(["sweep", "--config", "/nonexistent/sweep.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(bin().args(["sweep", "--bogus"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn cli_sweep_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "p": 30, "n": 80, "s_values": [1, 2], "trials": 2,
        "noise": {"model": "gaussian", "sigma": 0.05},
        "lambda_rule": {"scaled": 1.0}
    }"#;
    let path = dir.path().join("sweep.json");
    std::fs::write(&path, cfg).unwrap();
    let results = dir.path().join("results");
    let out = bin()
        .current_dir(dir.path())
        .args(["sweep", "--config", "sweep.json", "--out", "results/"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["records.csv", "summary.csv", "fit.csv"] {
        assert!(results.join(name).is_file(), "{name} missing");
    }
    let records = std::fs::read_to_string(results.join("records.csv")).unwrap();
    assert!(records.starts_with("s,n,trial,seed,error,iterations,runtime_seconds,converged"));
    assert_eq!(records.lines().count(), 1 + 2 * 2);
}
