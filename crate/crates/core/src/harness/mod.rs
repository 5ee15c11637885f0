//! Experiment orchestration: configuration, the end-to-end pipeline,
//! parameter sweeps, temporal-correlation measurement, and CSV reports.

mod config;
mod correlation;
mod pipeline;
mod report;
mod sweep;

pub use config::{ExperimentConfig, HiddenLayers, PowerConfig, SweepValues};
pub use correlation::{measure_temporal_correlation, TemporalCorrelation};
pub use pipeline::{
    channel_trajectories, evaluate_choices, label_sequence, prepare_data, random_arm, run_arm, run_on_data,
    run_pipeline, run_single, ArmOutcome, LabeledData, LabeledTrajectory, RateSummary, RunOutcome,
};
pub use report::{
    emit_loss_curves, failed_row, read_loss_curves, rows_for_run, write_manifest, write_rate_csv, Arm, RateRow,
    RATE_CSV_HEADER,
};
pub use sweep::{sweep, sweep_rows, SweepAxis};
