//! CSV outputs and the run manifest.

use std::fmt::Display;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use super::config::ExperimentConfig;
use super::pipeline::{RateSummary, RunOutcome};
use crate::error::{Error, Result};
use crate::mlp::TrainReport;

pub const RATE_CSV_HEADER: [&str; 10] = [
    "axis_value",
    "seed",
    "mean_achieved_rate",
    "mean_oracle_rate",
    "ratio",
    "top1_accuracy",
    "arm",
    "train_size",
    "t_s",
    "status",
];

/// Which decision rule produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Predictor with the configured history depth.
    Proposed,
    /// Predictor fed only the current sampled channel.
    Baseline,
    /// Uniformly random beam.
    Random,
}

impl Arm {
    pub fn as_str(self) -> &'static str {
        match self {
            Arm::Proposed => "proposed",
            Arm::Baseline => "baseline",
            Arm::Random => "random",
        }
    }
}

/// One line of a rate report. `summary` is `None` for a failed run, whose
/// `status` then carries the error.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub axis_value: String,
    pub seed: u64,
    pub arm: Arm,
    pub train_size: usize,
    pub t_s: usize,
    pub summary: Option<RateSummary>,
    pub status: String,
}

/// Rows for the proposed, baseline and random arms of a run.
pub fn rows_for_run(axis_value: impl Display, run: &RunOutcome) -> Vec<RateRow> {
    let axis_value = axis_value.to_string();
    let mut rows = vec![RateRow {
        axis_value: axis_value.clone(),
        seed: run.seed,
        arm: Arm::Proposed,
        train_size: run.train_size,
        t_s: run.proposed.t_s,
        summary: Some(run.proposed.summary),
        status: "ok".into(),
    }];
    if let Some(b) = &run.baseline {
        rows.push(RateRow {
            axis_value: axis_value.clone(),
            seed: run.seed,
            arm: Arm::Baseline,
            train_size: run.train_size,
            t_s: b.t_s,
            summary: Some(b.summary),
            status: "ok".into(),
        });
    }
    rows.push(RateRow {
        axis_value,
        seed: run.seed,
        arm: Arm::Random,
        train_size: run.train_size,
        t_s: run.proposed.t_s,
        summary: Some(run.random),
        status: "ok".into(),
    });
    rows
}

pub fn failed_row(axis_value: impl Display, seed: u64, train_size: usize, t_s: usize, err: &Error) -> RateRow {
    RateRow {
        axis_value: axis_value.to_string(),
        seed,
        arm: Arm::Proposed,
        train_size,
        t_s,
        summary: None,
        status: format!("error: {err}"),
    }
}

/// Writes rate rows; the first six columns are axis_value, seed,
/// mean_achieved_rate, mean_oracle_rate, ratio, top1_accuracy.
pub fn write_rate_csv<W: Write>(rows: &[RateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RATE_CSV_HEADER)?;
    for row in rows {
        let nums = match &row.summary {
            Some(s) => [s.mean_achieved_rate, s.mean_oracle_rate, s.ratio, s.top1_accuracy].map(|v| v.to_string()),
            None => std::array::from_fn(|_| "NaN".to_string()),
        };
        let [a, o, r, t] = nums;
        w.write_record([
            row.axis_value.clone(),
            row.seed.to_string(),
            a,
            o,
            r,
            t,
            row.arm.as_str().to_string(),
            row.train_size.to_string(),
            row.t_s.to_string(),
            row.status.clone(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Loss curves as CSV with columns epoch, lr, train_loss, test_loss.
pub fn emit_loss_curves<W: Write>(report: &TrainReport, out: W) -> Result<()> {
    if report.is_empty() {
        return Err(Error::InvalidConfig(
            "cannot emit loss curves of a zero-epoch report".into(),
        ));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epoch", "lr", "train_loss", "test_loss"])?;
    for e in 0..report.epochs() {
        w.write_record([
            e.to_string(),
            report.learning_rate[e].to_string(),
            report.train_loss[e].to_string(),
            report.test_loss[e].to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

#[derive(Deserialize)]
struct LossRow {
    epoch: usize,
    lr: f64,
    train_loss: f64,
    test_loss: f64,
}

/// Parses the output of [`emit_loss_curves`]. Mini-batch losses are not part
/// of the file and come back empty.
pub fn read_loss_curves<R: Read>(input: R) -> Result<TrainReport> {
    let mut report = TrainReport::default();
    for (i, row) in csv::Reader::from_reader(input).deserialize::<LossRow>().enumerate() {
        let row = row?;
        if row.epoch != i {
            return Err(Error::InvalidConfig(format!(
                "loss curve row {i} has epoch {}",
                row.epoch
            )));
        }
        report.learning_rate.push(row.lr);
        report.train_loss.push(row.train_loss);
        report.test_loss.push(row.test_loss);
    }
    Ok(report)
}

/// Writes the resolved configuration and master seeds next to the outputs.
pub fn write_manifest(path: impl AsRef<Path>, command: &str, config: &ExperimentConfig) -> Result<()> {
    let path = path.as_ref();
    let seeds: Vec<String> = config.seeds.iter().map(|s| s.to_string()).collect();
    let text = format!(
        "# risbeam run manifest\n# command: {command}\n# master seeds: {}\n# crate version: {}\n\n{}",
        seeds.join(", "),
        env!("CARGO_PKG_VERSION"),
        config.to_toml_string()
    );
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
