//! Training-stage data collection: active-element sampling, feature
//! encoding, history windows and the train/test split. Writes the first
//! few samples as CSV to stdout.
//!
//! cargo run --release --example history_dataset

use risbeam::dataset::{export_samples_csv, split, SplitSpec};
use risbeam::harness::{prepare_data, ExperimentConfig};

fn main() -> risbeam::Result<()> {
    let mut config = ExperimentConfig::desk_scale();
    config.k_in = 2;
    config.m_bar = 2;
    let data = prepare_data(&config, 0)?;
    println!("active elements {:?}", data.selection.indices());
    println!(
        "{} trajectories, {} labeled blocks",
        data.trajectories.len(),
        data.trajectories.iter().map(|t| t.len()).sum::<usize>()
    );

    for t_s in [1, 3] {
        let samples = data.samples(t_s)?;
        let first = &samples[0];
        println!(
            "t_s={t_s}: {} samples, history {:?}, target length {}",
            samples.len(),
            first.history.dim(),
            first.target.len()
        );
    }

    let samples = data.samples(config.t_s)?;
    let (train, test) = split(
        &samples,
        &SplitSpec {
            train_count: 400,
            test_count: 200,
            seed: 5,
        },
    )?;
    println!("split: {} train, {} test", train.len(), test.len());
    export_samples_csv(&train[..3], std::io::stdout().lock())?;
    Ok(())
}
