//! Temporally correlated channel sequences.
//!
//! A trajectory starts from randomly drawn rays on both links and moves
//! them by a small Gaussian random walk between consecutive coherence
//! blocks. `trajectory_step` is the angular drift standard deviation in
//! radians; gains drift by `trajectory_step` relative to their initial scale
//! and delays by `trajectory_step` tap periods.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::model::{generate_channel, ChannelRealization, RayPath, ScenarioConfig};
use crate::error::{Error, Result};
use crate::seed;

/// Ordered realizations of one scenario, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSequence {
    realizations: Vec<ChannelRealization>,
    /// Seed the sequence was drawn with; 0 for ingested data.
    pub seed: u64,
    /// Generating scenario, absent for ingested data.
    pub meta: Option<ScenarioConfig>,
}

impl ChannelSequence {
    pub fn new(realizations: Vec<ChannelRealization>, seed: u64, meta: Option<ScenarioConfig>) -> Result<Self> {
        let Some(first) = realizations.first() else {
            return Err(Error::InvalidConfig(
                "a channel sequence needs at least one realization".into(),
            ));
        };
        let dim = first.h_t().dim();
        if let Some(bad) = realizations.iter().find(|r| r.h_t().dim() != dim) {
            return Err(Error::shape(
                "channel sequence",
                format!("{dim:?}"),
                format!("{:?}", bad.h_t().dim()),
            ));
        }
        Ok(Self {
            realizations,
            seed,
            meta,
        })
    }

    pub fn realizations(&self) -> &[ChannelRealization] {
        &self.realizations
    }

    pub fn len(&self) -> usize {
        self.realizations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realizations.is_empty()
    }

    /// `(M, K)` shared by every realization.
    pub fn shape(&self) -> (usize, usize) {
        self.realizations[0].h_t().dim()
    }
}

fn complex_normal<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Folds `x` back into `[0, window)` by reflection at both edges.
fn reflect_into(mut x: f64, window: f64) -> f64 {
    let period = 2.0 * window;
    x = x.rem_euclid(period);
    if x >= window {
        x = period - x;
    }
    // `period - x` can land exactly on the upper edge.
    if x >= window {
        x = window * (1.0 - f64::EPSILON);
    }
    x
}

fn initial_rays<R: Rng>(config: &ScenarioConfig, rng: &mut R) -> Vec<RayPath> {
    let window = config.tap_window();
    let gain_var = 1.0 / config.num_paths as f64;
    (0..config.num_paths)
        .map(|_| RayPath {
            azimuth: rng.random_range(0.0..TAU),
            elevation: rng.random_range(0.0..TAU),
            gain: complex_normal(rng, gain_var),
            delay: rng.random_range(0.0..window),
        })
        .collect()
}

fn drift_rays<R: Rng>(config: &ScenarioConfig, rays: &mut [RayPath], rng: &mut R) {
    let step = config.trajectory_step;
    let window = config.tap_window();
    let gain_var = 1.0 / config.num_paths as f64;
    for ray in rays.iter_mut() {
        ray.azimuth = (ray.azimuth + step * normal(rng)).rem_euclid(TAU);
        ray.elevation = (ray.elevation + step * normal(rng)).rem_euclid(TAU);
        ray.gain += complex_normal(rng, gain_var) * step;
        ray.delay = reflect_into(ray.delay + step * config.sample_period * normal(rng), window);
    }
}

/// Draws a trajectory of `length` coherence blocks.
///
/// Deterministic in `(config, seed)`. A zero `trajectory_step` repeats the
/// first realization unchanged.
pub fn sample_trajectory(config: &ScenarioConfig, length: usize, seed: u64) -> Result<ChannelSequence> {
    config.validate()?;
    if length == 0 {
        return Err(Error::InvalidConfig("trajectory length must be >= 1".into()));
    }
    let mut rng = seed::rng(seed);
    let mut tx_rays = initial_rays(config, &mut rng);
    let mut rx_rays = initial_rays(config, &mut rng);
    let k = config.num_subcarriers;

    let mut realizations = Vec::with_capacity(length);
    for s in 0..length {
        if s > 0 {
            if config.trajectory_step == 0.0 {
                let prev = realizations.last().cloned().expect("previous realization");
                realizations.push(prev);
                continue;
            }
            drift_rays(config, &mut tx_rays, &mut rng);
            drift_rays(config, &mut rx_rays, &mut rng);
        }
        let h_t = generate_channel(config, &tx_rays, k)?;
        let h_r = generate_channel(config, &rx_rays, k)?;
        realizations.push(ChannelRealization::new(h_t, h_r)?);
    }
    ChannelSequence::new(realizations, seed, Some(config.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ArrayGeometry, Pulse};

    fn config(step: f64) -> ScenarioConfig {
        ScenarioConfig {
            geometry: ArrayGeometry::upa(1, 4, 4).unwrap(),
            num_paths: 2,
            num_subcarriers: 8,
            num_taps: 4,
            sample_period: 1e-8,
            path_loss: 1.0,
            pulse: Pulse::Sinc,
            trajectory_step: step,
        }
    }

    #[test]
    fn single_step_sequence() {
        let seq = sample_trajectory(&config(0.1), 1, 3).unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.shape(), (16, 8));
    }

    #[test]
    fn zero_step_repeats_exactly() {
        let seq = sample_trajectory(&config(0.0), 5, 9).unwrap();
        let first = &seq.realizations()[0];
        for r in seq.realizations() {
            assert_eq!(r, first);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = sample_trajectory(&config(0.05), 6, 42).unwrap();
        let b = sample_trajectory(&config(0.05), 6, 42).unwrap();
        let c = sample_trajectory(&config(0.05), 6, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn drift_changes_channel() {
        let seq = sample_trajectory(&config(0.05), 2, 1).unwrap();
        assert_ne!(seq.realizations()[0], seq.realizations()[1]);
    }

    #[test]
    fn reflection_stays_in_window() {
        for x in [-3.5, -0.0, 0.0, 0.99, 1.0, 1.5, 2.0, 7.25] {
            let y = reflect_into(x, 1.0);
            assert!((0.0..1.0).contains(&y), "{x} -> {y}");
        }
        assert_eq!(reflect_into(0.25, 1.0), 0.25);
        assert_eq!(reflect_into(-0.25, 1.0), 0.25);
        assert_eq!(reflect_into(1.25, 1.0), 0.75);
    }

    #[test]
    fn zero_length_rejected() {
        assert!(sample_trajectory(&config(0.1), 0, 1).is_err());
    }
}
