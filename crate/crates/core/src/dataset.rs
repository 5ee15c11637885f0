//! Training data collection: feature encoding, history windows, target
//! normalization, and train/test splitting.
//!
//! A sample for coherence block `s` stacks the encoded sampled channels of
//! blocks `s, s-1, ..., s-t_s+1` (current first) and pairs them with the rate
//! vector of block `s` divided by its maximum. The first `t_s - 1` blocks of
//! a trajectory have no complete history and produce no sample.

use std::io::Write;

use ndarray::{s, Array1, Array2};
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::ris::{first_argmax, RateVector, SampledChannel};
use crate::seed;

/// Real-valued, max-abs normalized encoding of one sampled channel.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Array1<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Where a sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SampleOrigin {
    pub trajectory: usize,
    /// Coherence block of the current (row 0) observation.
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSample {
    /// `t_s x F`; row `i` holds the features of block `s - i`.
    pub history: Array2<f64>,
    /// Rate vector scaled into `[0, 1]`.
    pub target: Array1<f64>,
    /// Exhaustive-search optimum of the current block.
    pub best_index: usize,
    pub origin: SampleOrigin,
}

impl TrainingSample {
    /// History flattened row-major, as fed to the network.
    pub fn input(&self) -> &[f64] {
        self.history.as_slice().expect("history is stored in standard layout")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_count: usize,
    pub test_count: usize,
    pub seed: u64,
}

/// Encodes subcarriers `0..k_in` of `sampled` as interleaved real/imaginary
/// parts, element-major, divided by the largest absolute component.
pub fn encode_features(sampled: &SampledChannel, k_in: usize) -> Result<FeatureVector> {
    let k = sampled.num_subcarriers();
    if k_in == 0 || k_in > k {
        return Err(Error::InvalidConfig(format!("k_in must lie in [1, {k}], got {k_in}")));
    }
    let mut values = Vec::with_capacity(2 * sampled.num_active() * k_in);
    for row in sampled.h_bar.rows() {
        for z in row.slice(s![..k_in]).iter() {
            values.push(z.re);
            values.push(z.im);
        }
    }
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        values.iter_mut().for_each(|v| *v /= peak);
    }
    Ok(FeatureVector {
        values: Array1::from(values),
    })
}

/// Divides rates by their maximum; an all-zero vector is returned unchanged.
pub fn normalize_targets(rates: &RateVector) -> Array1<f64> {
    let peak = rates.rates.iter().cloned().fold(0.0f64, f64::max);
    let v = Array1::from(rates.rates.clone());
    if peak > 0.0 {
        v / peak
    } else {
        v
    }
}

/// Builds `S - t_s + 1` windowed samples from one trajectory.
pub fn build_history_samples(
    features: &[FeatureVector],
    rate_vectors: &[RateVector],
    t_s: usize,
) -> Result<Vec<TrainingSample>> {
    build_trajectory_samples(features, rate_vectors, t_s, 0)
}

/// [`build_history_samples`] with the trajectory id recorded in each origin.
pub fn build_trajectory_samples(
    features: &[FeatureVector],
    rate_vectors: &[RateVector],
    t_s: usize,
    trajectory: usize,
) -> Result<Vec<TrainingSample>> {
    if t_s == 0 {
        return Err(Error::InvalidConfig("t_s must be >= 1".into()));
    }
    if features.len() != rate_vectors.len() {
        return Err(Error::shape("history samples", features.len(), rate_vectors.len()));
    }
    let s_len = features.len();
    if s_len < t_s {
        return Err(Error::InsufficientSamples {
            needed: t_s,
            available: s_len,
        });
    }
    let width = features[0].len();
    if let Some(bad) = features.iter().find(|f| f.len() != width) {
        return Err(Error::shape("feature width", width, bad.len()));
    }

    let samples = (t_s - 1..s_len)
        .map(|s| {
            let history = Array2::from_shape_fn((t_s, width), |(i, j)| features[s - i].values[j]);
            TrainingSample {
                history,
                target: normalize_targets(&rate_vectors[s]),
                best_index: rate_vectors[s].best_index,
                origin: SampleOrigin { trajectory, step: s },
            }
        })
        .collect();
    Ok(samples)
}

/// Shuffles by `spec.seed` and returns disjoint `(train, test)` partitions.
pub fn split(samples: &[TrainingSample], spec: &SplitSpec) -> Result<(Vec<TrainingSample>, Vec<TrainingSample>)> {
    if spec.train_count == 0 || spec.test_count == 0 {
        return Err(Error::InvalidConfig(format!(
            "train and test counts must be >= 1, got {} and {}",
            spec.train_count, spec.test_count
        )));
    }
    let needed = spec.train_count + spec.test_count;
    if needed > samples.len() {
        return Err(Error::InsufficientSamples {
            needed,
            available: samples.len(),
        });
    }
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.shuffle(&mut seed::rng(spec.seed));
    let train = order[..spec.train_count].iter().map(|&i| samples[i].clone()).collect();
    let test = order[spec.train_count..needed]
        .iter()
        .map(|&i| samples[i].clone())
        .collect();
    Ok((train, test))
}

/// Writes samples as CSV: a header row, then one row per sample holding the
/// flattened history (`h{row}_{col}`) followed by the target (`t{n}`).
pub fn export_samples_csv<W: Write>(samples: &[TrainingSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = samples.first() else {
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        return Ok(());
    };
    let (rows, cols) = first.history.dim();
    let mut header: Vec<String> = Vec::with_capacity(rows * cols + first.target.len());
    for r in 0..rows {
        for c in 0..cols {
            header.push(format!("h{r}_{c}"));
        }
    }
    header.extend((0..first.target.len()).map(|n| format!("t{n}")));
    w.write_record(&header)?;
    for sample in samples {
        if sample.history.dim() != (rows, cols) || sample.target.len() != first.target.len() {
            return Err(Error::shape(
                "sample export",
                format!("{rows}x{cols}"),
                format!("{:?}", sample.history.dim()),
            ));
        }
        let record: Vec<String> = sample
            .history
            .iter()
            .chain(sample.target.iter())
            .map(|v| v.to_string())
            .collect();
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Checks the label invariant: the target's first argmax is the oracle beam.
pub fn label_consistent(sample: &TrainingSample) -> bool {
    first_argmax(sample.target.as_slice().expect("contiguous target")).map(|(i, _)| i) == Some(sample.best_index)
}
