//! Writes a synthesized trajectory in the binary channel format, ingests it
//! again and runs the full pipeline on the ingested channels.
//!
//! cargo run --release --example channel_file_roundtrip

use risbeam::channel::{export_channels, ingest_channels, sample_trajectory};
use risbeam::harness::{run_single, ExperimentConfig};

fn main() -> risbeam::Result<()> {
    let mut config = ExperimentConfig::desk_scale();
    let path = std::env::temp_dir().join("risbeam-walk.risc");
    let seq = sample_trajectory(&config.scenario, 700, 9)?;
    export_channels(&path, &seq)?;
    let size = std::fs::metadata(&path).map(|m| m.len()).unwrap_or(0);
    println!("wrote {} blocks of shape {:?} ({size} bytes)", seq.len(), seq.shape());

    let back = ingest_channels(&path)?;
    assert_eq!(back.realizations(), seq.realizations());
    println!("ingested {} blocks, identical to the originals", back.len());

    config.channels = Some(path);
    config.train.max_epochs = 30;
    let run = run_single(&config, 400, 0)?;
    println!(
        "on ingested channels: ratio {:.4} (random {:.4})",
        run.proposed.summary.ratio, run.random.ratio
    );
    Ok(())
}
