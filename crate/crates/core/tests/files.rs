//! Channel files, checkpoints and CSV artifacts written to disk.

use std::fs;

use risbeam::channel::{export_channels, ingest_channels, sample_trajectory, ArrayGeometry, Pulse, ScenarioConfig};
use risbeam::harness::{emit_loss_curves, read_loss_curves, write_manifest, ExperimentConfig};
use risbeam::mlp::{forward, init_model, load_model, save_model, train, Examples, MlpArchitecture, TrainConfig};
use risbeam::Error;

fn scenario() -> ScenarioConfig {
    ScenarioConfig {
        geometry: ArrayGeometry::upa(1, 2, 2).unwrap(),
        num_paths: 2,
        num_subcarriers: 2,
        num_taps: 2,
        sample_period: 1e-8,
        path_loss: 1.0,
        pulse: Pulse::Sinc,
        trajectory_step: 0.1,
    }
}

#[test]
fn channel_file_round_trip_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.risc");
    let seq = sample_trajectory(&scenario(), 2, 5).unwrap();
    export_channels(&path, &seq).unwrap();
    let back = ingest_channels(&path).unwrap();
    assert_eq!(back.realizations(), seq.realizations());
    assert_eq!(back.meta, None);
}

#[test]
fn short_payload_on_disk_is_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.risc");
    let seq = sample_trajectory(&scenario(), 1, 5).unwrap();
    export_channels(&path, &seq).unwrap();
    let mut bytes = fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 8);
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(ingest_channels(&path), Err(Error::TruncatedPayload { .. })));
}

#[test]
fn nan_on_disk_is_non_finite() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nan.risc");
    let seq = sample_trajectory(&scenario(), 1, 5).unwrap();
    export_channels(&path, &seq).unwrap();
    let mut bytes = fs::read(&path).unwrap();
    let at = bytes.len() - 8;
    bytes[at..].copy_from_slice(&f64::NAN.to_le_bytes());
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(ingest_channels(&path), Err(Error::NonFinite { .. })));
}

#[test]
fn missing_file_reports_path() {
    let err = ingest_channels("/nonexistent/nowhere.risc").unwrap_err();
    assert!(err.to_string().contains("nowhere.risc"));
}

#[test]
fn saved_model_predicts_identically() {
    let dir = tempfile::tempdir().unwrap();
    let arch = MlpArchitecture::new(vec![3, 8, 8, 2], 0.2).unwrap();
    let x = ndarray::Array2::from_shape_fn((20, 3), |(i, j)| ((i * 3 + j) as f64).sin());
    let y = ndarray::Array2::from_shape_fn((20, 2), |(i, j)| ((i + j) as f64).cos());
    let cfg = TrainConfig {
        max_epochs: 5,
        batch_size: 5,
        ..TrainConfig::default()
    };
    let (model, report) = train(init_model(&arch, 1).unwrap(), &Examples::new(x, y).unwrap(), None, &cfg).unwrap();
    let path = dir.path().join("m.ckpt");
    save_model(&path, &model).unwrap();
    let loaded = load_model(&path).unwrap();
    let input = [0.3, -0.2, 0.9];
    assert_eq!(
        forward(&model, &input, false, 0).unwrap(),
        forward(&loaded, &input, false, 0).unwrap()
    );

    let curves = dir.path().join("loss.csv");
    emit_loss_curves(&report, fs::File::create(&curves).unwrap()).unwrap();
    let parsed = read_loss_curves(fs::File::open(&curves).unwrap()).unwrap();
    assert_eq!(parsed.train_loss, report.train_loss);
    assert_eq!(parsed.learning_rate, report.learning_rate);
}

#[test]
fn shipped_desk_config_matches_builtin() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/desk.toml");
    assert_eq!(ExperimentConfig::load(path).unwrap(), ExperimentConfig::desk_scale());
}

#[test]
fn shipped_full_config_is_valid() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/full.toml");
    let cfg = ExperimentConfig::load(path).unwrap();
    assert_eq!(
        cfg.architecture(3).unwrap().layer_widths,
        vec![3072, 1024, 4096, 8192, 1024]
    );
}

#[test]
fn manifest_records_command_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.txt");
    let cfg = ExperimentConfig::desk_scale();
    write_manifest(&path, "sweep", &cfg).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("command: sweep"));
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(ExperimentConfig::from_toml_str(&body).unwrap(), cfg);
}
