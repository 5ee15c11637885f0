//! Compares the history-windowed predictor (t_s = 3) with the
//! current-channel-only baseline (t_s = 1) and a random-beam floor on the
//! desk-scale scenario, for every configured master seed.
//!
//! cargo run --release --example history_benefit [-- <config.toml>]

use std::time::Instant;

use risbeam::harness::{run_pipeline, ExperimentConfig};

fn main() -> risbeam::Result<()> {
    let config = match std::env::args().nth(1) {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::desk_scale(),
    };
    let started = Instant::now();
    let runs = run_pipeline(&config)?;
    println!(
        "seed  train  ratio(t_s={})  ratio(t_s=1)  ratio(random)  top1(t_s={})  R*",
        config.t_s, config.t_s
    );
    let mut wins = 0;
    for run in &runs {
        let p = run.proposed.summary;
        let b = run.baseline.as_ref().map(|b| b.summary.ratio).unwrap_or(f64::NAN);
        if p.ratio > b {
            wins += 1;
        }
        println!(
            "{:>4}  {:>5}  {:>12.4}  {:>12.4}  {:>13.4}  {:>11.3}  {:.3}",
            run.seed, run.train_size, p.ratio, b, run.random.ratio, p.top1_accuracy, p.mean_oracle_rate
        );
        let r = &run.proposed.report;
        println!(
            "      loss: train {:.5} -> {:.5}, test {:.5} -> {:.5}",
            r.train_loss[0],
            r.train_loss.last().unwrap(),
            r.test_loss[0],
            r.test_loss.last().unwrap()
        );
    }
    println!(
        "history arm wins {wins}/{} runs in {:.1?}",
        runs.len(),
        started.elapsed()
    );
    Ok(())
}
