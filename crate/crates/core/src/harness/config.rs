//! Experiment configuration, loadable from a TOML file.
//!
//! Key schema (all keys at top level unless in a table):
//!
//! ```toml
//! seeds = [0, 1, 2, 3, 4]      # master seeds, one run per seed
//! t_s = 3                      # history depth, current block included
//! m_bar = 8                    # active RIS elements
//! k_in = 16                    # subcarriers fed to the network
//! codebook_size = 64
//! train_sizes = [50, 100, 200, 400]
//! test_size = 200
//! trajectory_length = 300      # coherence blocks per trajectory
//! # pilot_snr = 10.0           # optional, linear; omit for exact sampled channels
//! # channels = "file.risc"     # optional, ingest instead of synthesizing
//! output_dir = "runs/desk"
//!
//! [scenario]
//! geometry = { dims = [1, 8, 8], spacing = 0.5 }
//! num_paths = 1
//! num_subcarriers = 32
//! num_taps = 8
//! sample_period = 1e-8
//! path_loss = 1.0
//! pulse = "sinc"               # or "delta"
//! trajectory_step = 0.02
//!
//! [power]
//! total_power = 1.0            # P_T, linear
//! noise_power = 1.0            # σ², linear
//!
//! [mlp]
//! hidden_widths = [128, 256, 512]
//! dropout_rate = 0.1
//!
//! [train]                      # see TrainConfig
//! max_epochs = 100
//! batch_size = 25
//! l2_coefficient = 1e-4
//! initial_lr = 0.01
//! lr_drop_period_epochs = 30
//! lr_drop_factor = 0.5
//! momentum = 0.9
//! seed = 0                     # ignored; derived from each master seed
//!
//! [sweep]                      # values for each sweep axis
//! power = [0.1, 1.0, 10.0]
//! paths = [1, 3]
//! ris_size = [[1, 8, 8], [1, 12, 12]]
//! t_s = [1, 2, 3]
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{ArrayGeometry, Pulse, ScenarioConfig};
use crate::error::{Error, Result};
use crate::mlp::{MlpArchitecture, TrainConfig};
use crate::ris::LinkBudget;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    pub total_power: f64,
    pub noise_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HiddenLayers {
    pub hidden_widths: Vec<usize>,
    pub dropout_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepValues {
    #[serde(default)]
    pub power: Vec<f64>,
    #[serde(default)]
    pub paths: Vec<usize>,
    #[serde(default)]
    pub ris_size: Vec<[usize; 3]>,
    #[serde(default)]
    pub t_s: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    pub t_s: usize,
    pub m_bar: usize,
    pub k_in: usize,
    pub codebook_size: usize,
    pub train_sizes: Vec<usize>,
    pub test_size: usize,
    pub trajectory_length: usize,
    #[serde(default)]
    pub pilot_snr: Option<f64>,
    #[serde(default)]
    pub channels: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub scenario: ScenarioConfig,
    pub power: PowerConfig,
    pub mlp: HiddenLayers,
    pub train: TrainConfig,
    #[serde(default)]
    pub sweep: SweepValues,
}

impl ExperimentConfig {
    /// Small scenario that trains in seconds: an 8x8 surface, 64 DFT beams,
    /// 8 active elements, 16 of 32 subcarriers fed to a `[t_s·256, 128, 256,
    /// 512, 64]` network.
    pub fn desk_scale() -> Self {
        Self {
            seeds: vec![0, 1, 2, 3, 4],
            t_s: 3,
            m_bar: 8,
            k_in: 16,
            codebook_size: 64,
            train_sizes: vec![400],
            test_size: 200,
            trajectory_length: 300,
            pilot_snr: None,
            channels: None,
            output_dir: PathBuf::from("runs/desk"),
            scenario: ScenarioConfig {
                geometry: ArrayGeometry {
                    dims: [1, 8, 8],
                    spacing: 0.5,
                },
                num_paths: 1,
                num_subcarriers: 32,
                num_taps: 8,
                sample_period: 1e-8,
                path_loss: 1.0,
                pulse: Pulse::Sinc,
                trajectory_step: 0.02,
            },
            power: PowerConfig {
                total_power: 1.0,
                noise_power: 1.0,
            },
            mlp: HiddenLayers {
                hidden_widths: vec![128, 256, 512],
                dropout_rate: 0.1,
            },
            train: TrainConfig {
                max_epochs: 100,
                batch_size: 25,
                l2_coefficient: 1e-4,
                initial_lr: 0.01,
                lr_drop_period_epochs: 30,
                lr_drop_factor: 0.5,
                momentum: 0.9,
                seed: 0,
            },
            sweep: SweepValues {
                power: vec![0.1, 1.0, 10.0],
                paths: vec![1, 3],
                ris_size: vec![[1, 8, 8], [1, 12, 12]],
                t_s: vec![1, 2, 3],
            },
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("experiment config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        self.scenario.validate()?;
        self.budget()?;
        self.train.validate()?;
        if self.seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if self.t_s == 0 {
            return bad("t_s must be >= 1".into());
        }
        if self.test_size == 0 {
            return bad("test_size must be >= 1".into());
        }
        if self.train_sizes.is_empty() || self.train_sizes.contains(&0) {
            return bad("train_sizes must be non-empty and positive".into());
        }
        if self.train_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "train_sizes must be strictly ascending, got {:?}",
                self.train_sizes
            ));
        }
        let m = self.scenario.geometry.num_elements();
        if self.m_bar == 0 || self.m_bar > m {
            return bad(format!("m_bar must lie in [1, {m}], got {}", self.m_bar));
        }
        if self.k_in == 0 || self.k_in > self.scenario.num_subcarriers {
            return bad(format!(
                "k_in must lie in [1, {}], got {}",
                self.scenario.num_subcarriers, self.k_in
            ));
        }
        if self.codebook_size == 0 {
            return bad("codebook_size must be >= 1".into());
        }
        if self.channels.is_none() && self.trajectory_length < self.history_depth() {
            return bad(format!(
                "trajectory_length {} is shorter than the history depth {}",
                self.trajectory_length,
                self.history_depth()
            ));
        }
        if let Some(snr) = self.pilot_snr {
            if !(snr > 0.0 && snr.is_finite()) {
                return bad(format!("pilot_snr must be positive, got {snr}"));
            }
        }
        self.architecture(self.t_s)?;
        Ok(())
    }

    pub fn budget(&self) -> Result<LinkBudget> {
        LinkBudget::new(
            self.power.total_power,
            self.power.noise_power,
            self.scenario.num_subcarriers,
        )
    }

    /// Width of one encoded sampled channel, `2 · M̄ · K_in`.
    pub fn feature_width(&self) -> usize {
        2 * self.m_bar * self.k_in
    }

    /// Network for history depth `t_s`: `[t_s · 2M̄K_in, hidden.., |P|]`.
    pub fn architecture(&self, t_s: usize) -> Result<MlpArchitecture> {
        let mut widths = vec![t_s * self.feature_width()];
        widths.extend(&self.mlp.hidden_widths);
        widths.push(self.codebook_size);
        MlpArchitecture::new(widths, self.mlp.dropout_rate)
    }

    /// Deepest history any arm of this config needs; at least 1.
    pub fn history_depth(&self) -> usize {
        self.sweep.t_s.iter().copied().chain([self.t_s, 1]).max().unwrap_or(1)
    }

    pub fn max_train_size(&self) -> usize {
        *self.train_sizes.last().expect("validated non-empty")
    }
}
