//! Sweeps one axis of the desk scenario over every seed and prints the mean
//! ratio of each arm per axis value. Rows are also written as CSV.
//!
//! cargo run --release --example parameter_sweep -- [train_size|power|paths|ris_size|t_s]

use std::collections::BTreeMap;

use risbeam::harness::{sweep, ExperimentConfig, SweepAxis};

fn main() -> risbeam::Result<()> {
    let axis: SweepAxis = std::env::args().nth(1).as_deref().unwrap_or("power").parse()?;
    let mut config = ExperimentConfig::desk_scale();
    config.train_sizes = vec![50, 100, 200, 400];
    config.train.max_epochs = 40;
    let out = std::env::temp_dir().join("risbeam-sweep.csv");
    let rows = sweep(&config, axis, &out)?;

    let mut table: BTreeMap<(String, &str), Vec<f64>> = BTreeMap::new();
    for row in &rows {
        if let Some(s) = row.summary {
            table
                .entry((row.axis_value.clone(), row.arm.as_str()))
                .or_default()
                .push(s.ratio);
        }
    }
    println!("{axis:?} sweep, {} rows -> {}", rows.len(), out.display());
    for ((value, arm), ratios) in &table {
        println!(
            "  {value:>8}  {arm:<9} {:.4}",
            ratios.iter().sum::<f64>() / ratios.len() as f64
        );
    }
    Ok(())
}
