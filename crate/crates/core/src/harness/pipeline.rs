//! End-to-end experiment: collect labeled data along channel trajectories,
//! train the predictor on history windows, and evaluate the beams it picks
//! against the exhaustive-search optimum.
//!
//! Every stochastic stage draws from its own sub-seed of the run's master
//! seed: trajectories (`trajectory/i`), active elements (`active`), pilot
//! noise (`pilot/i`), the split (`split`), weight init (`init`), batch order
//! and dropout (`train`), and the random-beam control arm (`random-arm`).

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use super::config::ExperimentConfig;
use crate::channel::{ingest_channels, sample_trajectory, ChannelSequence};
use crate::dataset::{build_trajectory_samples, encode_features, split, FeatureVector, SplitSpec, TrainingSample};
use crate::error::{Error, Result};
use crate::mlp::{init_model, predict_beam, train, Examples, MlpModel, TrainConfig, TrainReport};
use crate::ris::{
    achievable_rate, build_dft_codebook, cascade, estimate_sampled_channel, exhaustive_search, sampled_channel,
    select_active_elements, Codebook, LinkBudget, RateVector, SelectionMatrix,
};
use crate::seed::{self, SimRng};

/// Oracle labels and encoded observations of one trajectory.
#[derive(Debug, Clone)]
pub struct LabeledTrajectory {
    pub cascades: Vec<Array2<Complex64>>,
    pub rates: Vec<RateVector>,
    pub features: Vec<FeatureVector>,
}

impl LabeledTrajectory {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

/// Everything collected during the training stage for one master seed.
#[derive(Debug, Clone)]
pub struct LabeledData {
    pub trajectories: Vec<LabeledTrajectory>,
    pub codebook: Codebook,
    pub budget: LinkBudget,
    pub selection: SelectionMatrix,
}

impl LabeledData {
    /// History-windowed samples over all trajectories for depth `t_s`.
    pub fn samples(&self, t_s: usize) -> Result<Vec<TrainingSample>> {
        let mut out = Vec::new();
        for (i, traj) in self.trajectories.iter().enumerate() {
            if traj.len() < t_s {
                continue;
            }
            out.extend(build_trajectory_samples(&traj.features, &traj.rates, t_s, i)?);
        }
        Ok(out)
    }

    fn cascade_of(&self, sample: &TrainingSample) -> &Array2<Complex64> {
        &self.trajectories[sample.origin.trajectory].cascades[sample.origin.step]
    }
}

/// Labels every block of `sequence` by exhaustive search and encodes what the
/// active elements observe (with pilot estimation noise when `pilot_snr` is set).
pub fn label_sequence(
    sequence: &ChannelSequence,
    selection: &SelectionMatrix,
    codebook: &Codebook,
    budget: &LinkBudget,
    k_in: usize,
    pilot_snr: Option<f64>,
    rng: &mut SimRng,
) -> Result<LabeledTrajectory> {
    let n = sequence.len();
    let mut out = LabeledTrajectory {
        cascades: Vec::with_capacity(n),
        rates: Vec::with_capacity(n),
        features: Vec::with_capacity(n),
    };
    for realization in sequence.realizations() {
        let c = cascade(realization)?;
        out.rates.push(exhaustive_search(&c, codebook, budget)?);
        out.cascades.push(c);
        let observed = match pilot_snr {
            Some(snr) => estimate_sampled_channel(selection, realization, snr, rng)?,
            None => sampled_channel(selection, realization)?,
        };
        out.features.push(encode_features(&observed, k_in)?);
    }
    Ok(out)
}

/// Channel trajectories for one master seed: either the ingested file or
/// enough synthetic trajectories to fill the largest train set plus the test
/// set at the deepest history any arm uses.
pub fn channel_trajectories(config: &ExperimentConfig, master_seed: u64) -> Result<Vec<ChannelSequence>> {
    if let Some(path) = &config.channels {
        let seq = ingest_channels(path)?;
        let (m, k) = seq.shape();
        let want = (config.scenario.geometry.num_elements(), config.scenario.num_subcarriers);
        if (m, k) != want {
            return Err(Error::shape(
                "ingested channels (M, K)",
                format!("{want:?}"),
                format!("{:?}", (m, k)),
            ));
        }
        return Ok(vec![seq]);
    }
    let per_trajectory = config.trajectory_length + 1 - config.history_depth();
    let needed = config.max_train_size() + config.test_size;
    let count = needed.div_ceil(per_trajectory);
    (0..count)
        .map(|i| {
            sample_trajectory(
                &config.scenario,
                config.trajectory_length,
                seed::derive_indexed(master_seed, "trajectory", i as u64),
            )
        })
        .collect()
}

/// Training-stage data collection for one master seed.
pub fn prepare_data(config: &ExperimentConfig, master_seed: u64) -> Result<LabeledData> {
    config.validate()?;
    let budget = config.budget()?;
    let codebook = build_dft_codebook(&config.scenario.geometry, config.codebook_size)?;
    let selection = select_active_elements(
        config.scenario.geometry.num_elements(),
        config.m_bar,
        seed::derive(master_seed, "active"),
    )?;
    let trajectories = channel_trajectories(config, master_seed)?
        .iter()
        .enumerate()
        .map(|(i, seq)| {
            let mut rng = seed::rng(seed::derive_indexed(master_seed, "pilot", i as u64));
            label_sequence(
                seq,
                &selection,
                &codebook,
                &budget,
                config.k_in,
                config.pilot_snr,
                &mut rng,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledData {
        trajectories,
        codebook,
        budget,
        selection,
    })
}

/// Rate statistics of a set of beam decisions on held-out samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSummary {
    pub mean_achieved_rate: f64,
    pub mean_oracle_rate: f64,
    /// `mean_achieved_rate / mean_oracle_rate`, 1 when the oracle rate is 0.
    pub ratio: f64,
    pub top1_accuracy: f64,
    /// Samples whose achieved rate exceeded the oracle rate. Always 0 unless
    /// the oracle is broken.
    pub soundness_violations: usize,
}

/// Recomputes the achievable rate of each chosen beam and compares it with
/// the oracle optimum of the same block.
pub fn evaluate_choices(data: &LabeledData, test: &[TrainingSample], choices: &[usize]) -> Result<RateSummary> {
    if test.is_empty() || test.len() != choices.len() {
        return Err(Error::shape("evaluation", test.len(), choices.len()));
    }
    let mut achieved = 0.0;
    let mut oracle = 0.0;
    let mut hits = 0usize;
    let mut violations = 0usize;
    for (sample, &choice) in test.iter().zip(choices) {
        let rates = &data.trajectories[sample.origin.trajectory].rates[sample.origin.step];
        let r = achievable_rate(data.cascade_of(sample), data.codebook.beam(choice), &data.budget)?;
        if r > rates.best_rate {
            violations += 1;
        }
        achieved += r;
        oracle += rates.best_rate;
        hits += usize::from(choice == rates.best_index);
    }
    let n = test.len() as f64;
    Ok(RateSummary {
        mean_achieved_rate: achieved / n,
        mean_oracle_rate: oracle / n,
        ratio: if oracle > 0.0 { achieved / oracle } else { 1.0 },
        top1_accuracy: hits as f64 / n,
        soundness_violations: violations,
    })
}

/// Outcome of training and evaluating one predictor.
#[derive(Debug, Clone)]
pub struct ArmOutcome {
    pub t_s: usize,
    pub summary: RateSummary,
    pub report: TrainReport,
    pub model: MlpModel,
    pub test: Vec<TrainingSample>,
}

/// Splits, trains and evaluates the predictor with history depth `t_s`.
pub fn run_arm(
    config: &ExperimentConfig,
    data: &LabeledData,
    t_s: usize,
    train_size: usize,
    master_seed: u64,
) -> Result<ArmOutcome> {
    let samples = data.samples(t_s)?;
    let spec = SplitSpec {
        train_count: train_size,
        test_count: config.test_size,
        seed: seed::derive(master_seed, "split"),
    };
    let (train_set, test_set) = split(&samples, &spec)?;
    let arch = config.architecture(t_s)?;
    let model = init_model(&arch, seed::derive(master_seed, "init"))?;
    let train_cfg = TrainConfig {
        seed: seed::derive(master_seed, "train"),
        ..config.train.clone()
    };
    let (model, report) = train(
        model,
        &Examples::from_samples(&train_set)?,
        Some(&Examples::from_samples(&test_set)?),
        &train_cfg,
    )?;
    let choices = test_set
        .iter()
        .map(|s| predict_beam(&model, s.input(), &data.codebook).map(|(i, _)| i))
        .collect::<Result<Vec<_>>>()?;
    let summary = evaluate_choices(data, &test_set, &choices)?;
    Ok(ArmOutcome {
        t_s,
        summary,
        report,
        model,
        test: test_set,
    })
}

/// Uniformly random beams on the given test set.
pub fn random_arm(data: &LabeledData, test: &[TrainingSample], master_seed: u64) -> Result<RateSummary> {
    let mut rng = seed::rng(seed::derive(master_seed, "random-arm"));
    let choices: Vec<usize> = test.iter().map(|_| rng.random_range(0..data.codebook.size())).collect();
    evaluate_choices(data, test, &choices)
}

/// The proposed arm, the current-channel-only baseline (when `t_s > 1`),
/// and the random-beam floor for one (train size, master seed).
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub train_size: usize,
    pub seed: u64,
    pub proposed: ArmOutcome,
    pub baseline: Option<ArmOutcome>,
    pub random: RateSummary,
}

pub fn run_on_data(
    config: &ExperimentConfig,
    data: &LabeledData,
    train_size: usize,
    master_seed: u64,
) -> Result<RunOutcome> {
    let proposed = run_arm(config, data, config.t_s, train_size, master_seed)?;
    let baseline = if config.t_s > 1 {
        Some(run_arm(config, data, 1, train_size, master_seed)?)
    } else {
        None
    };
    let random = random_arm(data, &proposed.test, master_seed)?;
    Ok(RunOutcome {
        train_size,
        seed: master_seed,
        proposed,
        baseline,
        random,
    })
}

/// One full run: data collection, then all arms.
pub fn run_single(config: &ExperimentConfig, train_size: usize, master_seed: u64) -> Result<RunOutcome> {
    let data = prepare_data(config, master_seed)?;
    run_on_data(config, &data, train_size, master_seed)
}

/// Every (train size, seed) run of the config, ordered by train size then
/// seed. Data collection is shared across train sizes of one seed.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    let mut keyed = Vec::with_capacity(config.seeds.len() * config.train_sizes.len());
    for (seed_pos, &s) in config.seeds.iter().enumerate() {
        let data = prepare_data(config, s)?;
        for (size_pos, &n) in config.train_sizes.iter().enumerate() {
            keyed.push(((size_pos, seed_pos), run_on_data(config, &data, n, s)?));
        }
    }
    keyed.sort_by_key(|(key, _)| *key);
    let out = keyed.into_iter().map(|(_, run)| run).collect();
    Ok(out)
}
