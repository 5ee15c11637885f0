use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::pipeline::{prepare_data, run_on_data, run_single};
use super::report::{failed_row, rows_for_run, write_rate_csv, RateRow};
use crate::error::{Error, Result};

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    TrainSize,
    /// Total transmit power P_T, linear scale.
    Power,
    Paths,
    RisSize,
    HistoryDepth,
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "train_size" => SweepAxis::TrainSize,
            "power" => SweepAxis::Power,
            "paths" => SweepAxis::Paths,
            "ris_size" => SweepAxis::RisSize,
            "t_s" => SweepAxis::HistoryDepth,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown sweep axis {other:?}; expected train_size, power, paths, ris_size or t_s"
                )))
            }
        })
    }
}

/// One configuration per axis value, labeled for the CSV.
fn axis_points(config: &ExperimentConfig, axis: SweepAxis) -> Result<Vec<(String, ExperimentConfig)>> {
    let values = &config.sweep;
    let points: Vec<(String, ExperimentConfig)> = match axis {
        SweepAxis::TrainSize => config
            .train_sizes
            .iter()
            .map(|&n| {
                let mut c = config.clone();
                c.train_sizes = vec![n];
                (n.to_string(), c)
            })
            .collect(),
        SweepAxis::Power => values
            .power
            .iter()
            .map(|&p| {
                let mut c = config.clone();
                c.power.total_power = p;
                (p.to_string(), c)
            })
            .collect(),
        SweepAxis::Paths => values
            .paths
            .iter()
            .map(|&l| {
                let mut c = config.clone();
                c.scenario.num_paths = l;
                (l.to_string(), c)
            })
            .collect(),
        SweepAxis::RisSize => values
            .ris_size
            .iter()
            .map(|&dims| {
                let mut c = config.clone();
                c.scenario.geometry.dims = dims;
                (format!("{}x{}x{}", dims[0], dims[1], dims[2]), c)
            })
            .collect(),
        SweepAxis::HistoryDepth => values
            .t_s
            .iter()
            .map(|&t| {
                let mut c = config.clone();
                c.t_s = t;
                (t.to_string(), c)
            })
            .collect(),
    };
    if points.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no values configured for sweep axis {axis:?}"
        )));
    }
    Ok(points)
}

/// Runs every (axis value, seed) pair and returns the report rows in axis
/// then seed order.
///
/// Pairs run concurrently. A pair that fails contributes one flagged row
/// and the sweep carries on. Non-train-size axes train on the largest
/// configured train size.
pub fn sweep_rows(config: &ExperimentConfig, axis: SweepAxis) -> Result<Vec<RateRow>> {
    config.validate()?;
    let points = axis_points(config, axis)?;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|p| config.seeds.iter().map(move |&s| (p, s)))
        .collect();
    let rows: Vec<Vec<RateRow>> = jobs
        .par_iter()
        .map(|&(p, seed)| {
            let (label, cfg) = &points[p];
            let train_size = cfg.max_train_size();
            let outcome = cfg.validate().and_then(|_| match axis {
                SweepAxis::TrainSize => {
                    // Same data for every train size of a seed.
                    let mut shared = config.clone();
                    shared.train_sizes = vec![config.max_train_size()];
                    let data = prepare_data(&shared, seed)?;
                    run_on_data(cfg, &data, train_size, seed)
                }
                _ => run_single(cfg, train_size, seed),
            });
            match outcome {
                Ok(run) => rows_for_run(label, &run),
                Err(e) => vec![failed_row(label, seed, train_size, cfg.t_s, &e)],
            }
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Runs the sweep and writes its CSV to `out`.
pub fn sweep(config: &ExperimentConfig, axis: SweepAxis, out: impl AsRef<Path>) -> Result<Vec<RateRow>> {
    let rows = sweep_rows(config, axis)?;
    let out = out.as_ref();
    let file = File::create(out).map_err(|e| Error::io(out, e))?;
    write_rate_csv(&rows, BufWriter::new(file))?;
    Ok(rows)
}
