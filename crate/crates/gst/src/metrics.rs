//! `metrics.csv` rows and the spectral sidecar.

use std::fmt::Write as _;
use std::path::Path;

use gst_core::engine::{EpochRecord, Phase};
use gst_core::spectral::PreservationReport;

pub const HEADER: &str = "phase,epoch,interval,train_acc,val_acc,test_acc,loss,sparsity,swap_count,spectral_preservation,macs_estimate";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowPhase {
    Anchor,
    Sparse,
    Eval,
}

impl RowPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            RowPhase::Anchor => "anchor",
            RowPhase::Sparse => "sparse",
            RowPhase::Eval => "eval",
        }
    }
}

impl From<Phase> for RowPhase {
    fn from(p: Phase) -> Self {
        match p {
            Phase::Anchor => RowPhase::Anchor,
            Phase::Sparse => RowPhase::Sparse,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub phase: RowPhase,
    pub epoch: usize,
    pub interval: usize,
    pub train_acc: f64,
    pub val_acc: f64,
    pub test_acc: f64,
    /// Training loss; empty for eval rows.
    pub loss: Option<f64>,
    pub sparsity: f64,
    pub swap_count: usize,
    /// Only on eval rows.
    pub spectral_preservation: Option<f64>,
    pub macs_estimate: u64,
}

impl MetricsRow {
    pub fn from_epoch(r: &EpochRecord, macs: u64) -> Self {
        MetricsRow {
            phase: r.phase.into(),
            epoch: r.epoch,
            interval: r.interval,
            train_acc: r.train_acc,
            val_acc: r.val_acc,
            test_acc: r.test_acc,
            loss: Some(r.loss),
            sparsity: r.sparsity,
            swap_count: r.swap_count,
            spectral_preservation: None,
            macs_estimate: macs,
        }
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.phase.as_str(),
            self.epoch,
            self.interval,
            self.train_acc,
            self.val_acc,
            self.test_acc,
            opt(self.loss),
            self.sparsity,
            self.swap_count,
            opt(self.spectral_preservation),
            self.macs_estimate
        )
    }
}

pub fn render(rows: &[MetricsRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn write_metrics(path: &Path, rows: &[MetricsRow]) -> std::io::Result<()> {
    std::fs::write(path, render(rows))
}

pub fn append_row(path: &Path, row: &MetricsRow) -> std::io::Result<()> {
    use std::io::Write;
    let mut f = std::fs::OpenOptions::new().append(true).open(path)?;
    writeln!(f, "{}", row.to_csv())
}

/// Per-eigenvalue relative errors, one line per compared pair.
pub fn render_sidecar(report: &PreservationReport) -> String {
    let mut s = String::from("index,full,sparse,relative_error,clamped\n");
    for (i, t) in report.terms.iter().enumerate() {
        writeln!(s, "{},{},{},{},{}", i, t.full, t.sparse, t.relative_error, t.clamped).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_rows_leave_loss_empty() {
        let row = MetricsRow {
            phase: RowPhase::Eval,
            epoch: 3,
            interval: 0,
            train_acc: 1.0,
            val_acc: 0.5,
            test_acc: 0.25,
            loss: None,
            sparsity: 0.3,
            swap_count: 0,
            spectral_preservation: Some(0.0),
            macs_estimate: 42,
        };
        assert_eq!(row.to_csv(), "eval,3,0,1,0.5,0.25,,0.3,0,0,42");
        assert_eq!(HEADER.split(',').count(), row.to_csv().split(',').count());
    }
}
