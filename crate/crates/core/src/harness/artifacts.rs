//! Experiment artifacts: the per-run results CSV, the summary JSON, and
//! per-run loss-curve CSVs for external plotting. All floats print in
//! round-trip form with '.' decimal separators.

use std::fmt::Write as _;
use std::path::Path;

use super::{ExperimentReport, RunResult};
use crate::error::{Error, Result};

pub const RESULTS_HEADER: &str =
    "fold,seed,mode,auc,auc_ci_lo,auc_ci_hi,afp,sparsity,end_epoch,seconds";

/// One row per (fold, seed, mode) run.
pub fn write_results_csv(runs: &[RunResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for run in runs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            run.fold,
            run.seed,
            run.mode.as_str(),
            run.auc,
            run.auc_ci.0,
            run.auc_ci.1,
            run.firing.afp,
            run.firing.sparsity_ratio,
            run.end_epoch,
            run.seconds
        );
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Summary JSON mirroring the experiment report.
pub fn write_summary_json(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?;
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Loss-curve CSV for one run: epoch, presented-batch loss, full-train
/// evaluation loss, hidden AFP.
pub fn write_loss_curve_csv(run: &RunResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::from("epoch,presented_loss,train_loss,afp\n");
    for (epoch, ((presented, train), afp)) in run
        .presented_loss_curve
        .iter()
        .zip(&run.train_loss_curve)
        .zip(&run.afp_curve)
        .enumerate()
    {
        let _ = writeln!(out, "{epoch},{presented},{train},{afp}");
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}
