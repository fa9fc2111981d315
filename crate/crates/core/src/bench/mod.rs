//! Experiment harness: phase-transition grids, sparsity sweeps, the
//! min-MAD scaling fit, deterministic seeding and CSV output.

pub mod cli;
mod config;
mod csv;
mod fit;
mod run;

pub use config::{GridConfig, LambdaRule, SolveRunConfig, SpcaRunConfig, SweepConfig};
pub use csv::{write_fit, write_lambdas, write_records, write_summary};
pub use fit::{fit_scaling, scaling_profile, ScalingFit};
pub use run::{
    quantile, run_phase_grid, run_sparsity_sweep, run_spca_trials, run_trial, summarize, ExperimentRecord,
    GridOutcome, SpcaTrialRecord, SummaryRow, SweepOutcome, TrialSpec,
};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "SPARSELIFT_THREADS";
