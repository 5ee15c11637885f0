//! Lag-1 and lag-5 correlation of oracle rate vectors as the per-block
//! drift grows.
//!
//! cargo run --release --example temporal_correlation

use risbeam::channel::sample_trajectory;
use risbeam::harness::{measure_temporal_correlation, ExperimentConfig};
use risbeam::ris::build_dft_codebook;

fn main() -> risbeam::Result<()> {
    let config = ExperimentConfig::desk_scale();
    let codebook = build_dft_codebook(&config.scenario.geometry, config.codebook_size)?;
    let budget = config.budget()?;
    println!("  step   lag-1   lag-5");
    for step in [0.0, 0.005, 0.02, 0.1, 0.5, 1.0] {
        let mut scenario = config.scenario.clone();
        scenario.trajectory_step = step;
        let (mut l1, mut l5) = (0.0, 0.0);
        for &seed in &config.seeds {
            let seq = sample_trajectory(&scenario, 100, seed)?;
            l1 += measure_temporal_correlation(&seq, &codebook, &budget, 1)?.value;
            l5 += measure_temporal_correlation(&seq, &codebook, &budget, 5)?.value;
        }
        let n = config.seeds.len() as f64;
        println!("{step:>6}  {:.4}  {:.4}", l1 / n, l5 / n);
    }
    Ok(())
}
