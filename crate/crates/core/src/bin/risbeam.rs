//! Command-line front end. Every subcommand reads an experiment config
//! (TOML, or the built-in desk-scale config), applies flag overrides, and
//! writes its outputs plus a run manifest into the output directory.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use risbeam::channel::{export_channels, ingest_channels, sample_trajectory};
use risbeam::harness::{
    emit_loss_curves, evaluate_choices, measure_temporal_correlation, prepare_data, random_arm, run_arm, sweep,
    write_manifest, write_rate_csv, Arm, ExperimentConfig, RateRow, SweepAxis,
};
use risbeam::mlp::{load_model, predict_beam, save_model};
use risbeam::ris::{build_dft_codebook, cascade, exhaustive_search};
use risbeam::{Error, Result};

#[derive(Parser)]
#[command(
    name = "risbeam",
    version,
    about = "RIS beam selection from history-windowed sampled channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML). Defaults to the desk-scale scenario.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    #[arg(long)]
    t_s: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    train_sizes: Option<Vec<usize>>,
    #[arg(long)]
    test_size: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    trajectory_step: Option<f64>,
    /// Ingest channels from this file instead of synthesizing them.
    #[arg(long)]
    channels: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::desk_scale(),
        };
        if let Some(v) = &self.seeds {
            cfg.seeds = v.clone();
        }
        if let Some(v) = self.t_s {
            cfg.t_s = v;
        }
        if let Some(v) = &self.train_sizes {
            cfg.train_sizes = v.clone();
        }
        if let Some(v) = self.test_size {
            cfg.test_size = v;
        }
        if let Some(v) = self.epochs {
            cfg.train.max_epochs = v;
        }
        if let Some(v) = self.trajectory_step {
            cfg.scenario.trajectory_step = v;
        }
        if let Some(v) = &self.channels {
            cfg.channels = Some(v.clone());
        }
        if let Some(v) = &self.output_dir {
            cfg.output_dir = v.clone();
        }
        cfg.validate()?;
        fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Io {
            path: cfg.output_dir.clone(),
            source: e,
        })?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a channel trajectory and write it in the binary container format.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Blocks in the trajectory; defaults to trajectory_length.
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, default_value = "channels.risc")]
        out: PathBuf,
    },
    /// Label every block of a channel file with its oracle rate vector.
    Label {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "labels.csv")]
        out: PathBuf,
    },
    /// Collect data, train the predictor for the first seed and largest train size.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "model.ckpt")]
        model: PathBuf,
    },
    /// Evaluate a trained checkpoint on the held-out split of the same run.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "model.ckpt")]
        model: PathBuf,
        #[arg(long, default_value = "evaluation.csv")]
        out: PathBuf,
    },
    /// Sweep one axis (train_size, power, paths, ris_size, t_s) over all seeds.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lagged correlation of oracle rate vectors for several drift levels.
    Correlate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.005,0.05,0.5")]
        steps: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        lag: usize,
        #[arg(long, default_value = "correlation.csv")]
        out: PathBuf,
    },
}

fn in_dir(cfg: &ExperimentConfig, file: &Path) -> PathBuf {
    if file.is_absolute() {
        file.to_path_buf()
    } else {
        cfg.output_dir.join(file)
    }
}

fn csv_file(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common, length, out } => {
            let cfg = common.resolve()?;
            let seed = cfg.seeds[0];
            let seq = sample_trajectory(&cfg.scenario, length.unwrap_or(cfg.trajectory_length), seed)?;
            let path = in_dir(&cfg, &out);
            export_channels(&path, &seq)?;
            write_manifest(cfg.output_dir.join("generate-manifest.txt"), "generate", &cfg)?;
            println!("wrote {} blocks to {}", seq.len(), path.display());
        }
        Command::Label { common, out } => {
            let cfg = common.resolve()?;
            let path = cfg
                .channels
                .clone()
                .ok_or_else(|| Error::InvalidConfig("label needs --channels".into()))?;
            let seq = ingest_channels(&path)?;
            let codebook = build_dft_codebook(&cfg.scenario.geometry, cfg.codebook_size)?;
            let budget = cfg.budget()?;
            let out = in_dir(&cfg, &out);
            let mut w = csv_file(&out)?;
            let mut header = vec!["step".to_string(), "best_index".into(), "best_rate".into()];
            header.extend((0..codebook.size()).map(|n| format!("r{n}")));
            w.write_record(&header)?;
            for (s, r) in seq.realizations().iter().enumerate() {
                let rv = exhaustive_search(&cascade(r)?, &codebook, &budget)?;
                let mut rec = vec![s.to_string(), rv.best_index.to_string(), rv.best_rate.to_string()];
                rec.extend(rv.rates.iter().map(|v| v.to_string()));
                w.write_record(&rec)?;
            }
            w.flush().map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            write_manifest(cfg.output_dir.join("label-manifest.txt"), "label", &cfg)?;
            println!("labeled {} blocks into {}", seq.len(), out.display());
        }
        Command::Train { common, model } => {
            let cfg = common.resolve()?;
            let seed = cfg.seeds[0];
            let data = prepare_data(&cfg, seed)?;
            let arm = run_arm(&cfg, &data, cfg.t_s, cfg.max_train_size(), seed)?;
            save_model(in_dir(&cfg, &model), &arm.model)?;
            let loss_path = cfg.output_dir.join("loss.csv");
            let f = File::create(&loss_path).map_err(|e| Error::Io {
                path: loss_path.clone(),
                source: e,
            })?;
            emit_loss_curves(&arm.report, BufWriter::new(f))?;
            write_manifest(cfg.output_dir.join("train-manifest.txt"), "train", &cfg)?;
            println!(
                "seed {seed}: ratio {:.4}, top-1 {:.3}, final train/test loss {:.5}/{:.5}",
                arm.summary.ratio,
                arm.summary.top1_accuracy,
                arm.report.train_loss.last().copied().unwrap_or(f64::NAN),
                arm.report.test_loss.last().copied().unwrap_or(f64::NAN)
            );
        }
        Command::Evaluate { common, model, out } => {
            let cfg = common.resolve()?;
            let seed = cfg.seeds[0];
            let model = load_model(in_dir(&cfg, &model))?;
            let data = prepare_data(&cfg, seed)?;
            let samples = data.samples(cfg.t_s)?;
            let spec = risbeam::dataset::SplitSpec {
                train_count: cfg.max_train_size(),
                test_count: cfg.test_size,
                seed: risbeam::seed::derive(seed, "split"),
            };
            let (_, test) = risbeam::dataset::split(&samples, &spec)?;
            let choices = test
                .iter()
                .map(|s| predict_beam(&model, s.input(), &data.codebook).map(|(i, _)| i))
                .collect::<Result<Vec<_>>>()?;
            let summary = evaluate_choices(&data, &test, &choices)?;
            let floor = random_arm(&data, &test, seed)?;
            let row = |arm, s| RateRow {
                axis_value: cfg.max_train_size().to_string(),
                seed,
                arm,
                train_size: cfg.max_train_size(),
                t_s: cfg.t_s,
                summary: Some(s),
                status: "ok".into(),
            };
            let out = in_dir(&cfg, &out);
            let f = File::create(&out).map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            write_rate_csv(
                &[row(Arm::Proposed, summary), row(Arm::Random, floor)],
                BufWriter::new(f),
            )?;
            write_manifest(cfg.output_dir.join("evaluate-manifest.txt"), "evaluate", &cfg)?;
            println!(
                "ratio {:.4} (random {:.4}), top-1 {:.3}",
                summary.ratio, floor.ratio, summary.top1_accuracy
            );
        }
        Command::Sweep { common, axis, out } => {
            let cfg = common.resolve()?;
            let out = out.unwrap_or_else(|| PathBuf::from("sweep.csv"));
            let out = in_dir(&cfg, &out);
            let rows = sweep(&cfg, axis, &out)?;
            write_manifest(cfg.output_dir.join("sweep-manifest.txt"), "sweep", &cfg)?;
            let failed = rows.iter().filter(|r| r.summary.is_none()).count();
            println!("wrote {} rows ({failed} failed) to {}", rows.len(), out.display());
        }
        Command::Correlate {
            common,
            steps,
            length,
            lag,
            out,
        } => {
            let cfg = common.resolve()?;
            let codebook = build_dft_codebook(&cfg.scenario.geometry, cfg.codebook_size)?;
            let budget = cfg.budget()?;
            let out = in_dir(&cfg, &out);
            let mut w = csv_file(&out)?;
            w.write_record(["trajectory_step", "seed", "lag", "correlation", "degenerate"])?;
            for &step in &steps {
                let mut scenario = cfg.scenario.clone();
                scenario.trajectory_step = step;
                for &seed in &cfg.seeds {
                    let seq = sample_trajectory(&scenario, length, seed)?;
                    let c = measure_temporal_correlation(&seq, &codebook, &budget, lag)?;
                    w.write_record([
                        step.to_string(),
                        seed.to_string(),
                        lag.to_string(),
                        c.value.to_string(),
                        c.degenerate.to_string(),
                    ])?;
                }
            }
            w.flush().map_err(|e| Error::Io {
                path: out.clone(),
                source: e,
            })?;
            write_manifest(cfg.output_dir.join("correlate-manifest.txt"), "correlate", &cfg)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
