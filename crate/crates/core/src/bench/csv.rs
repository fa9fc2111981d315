//! CSV emitters. Floats use 17 significant digits and `\n` line endings so
//! that reruns are byte-identical.

use std::io::Write;

use super::fit::ScalingFit;
use super::run::{ExperimentRecord, SummaryRow};
use crate::error::Result;

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], mut w: W) -> Result<()> {
    writeln!(w, "s,n,trial,seed,error,iterations,runtime_seconds,converged")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.s,
            r.n,
            r.trial,
            r.seed,
            float(r.error),
            r.iterations,
            float(r.runtime_seconds),
            r.converged
        )?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], mut w: W) -> Result<()> {
    writeln!(w, "s,n,quantile_error,success_rate")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.s, r.n, float(r.quantile_error), float(r.success_rate))?;
    }
    Ok(())
}

pub fn write_fit<W: Write>(fit: &ScalingFit, mut w: W) -> Result<()> {
    writeln!(w, "c,mad")?;
    writeln!(w, "{},{}", float(fit.c), float(fit.mad))?;
    Ok(())
}

/// The `λ` used by every trial.
pub fn write_lambdas<W: Write>(records: &[ExperimentRecord], mut w: W) -> Result<()> {
    writeln!(w, "s,n,trial,lambda")?;
    for r in records {
        writeln!(w, "{},{},{},{}", r.s, r.n, r.trial, float(r.lambda))?;
    }
    Ok(())
}
