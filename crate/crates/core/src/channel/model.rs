//! Wideband geometric channel in the frequency domain.
//!
//! Each link is a sum of `L` rays. Ray `l` contributes its complex gain times
//! the array response toward its angles, filtered by the pulse shape sampled
//! on the `D`-tap delay grid. Tap `d` then rotates subcarrier `k` by
//! `exp(-j 2π k d / K)`, and the link is scaled by `sqrt(M / ρ)`.

use std::f64::consts::{PI, TAU};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{array_response, ArrayGeometry};
use crate::error::{Error, Result};

/// One propagation path (scattering cluster).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayPath {
    /// Azimuth angle of arrival, radians in `[0, 2π)`.
    pub azimuth: f64,
    /// Elevation angle of arrival, radians in `[0, 2π)`.
    pub elevation: f64,
    pub gain: Complex64,
    /// Propagation delay in seconds.
    pub delay: f64,
}

/// Pulse-shaping filter evaluated on the tap grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pulse {
    /// `sin(π t / Ts) / (π t / Ts)`, equal to 1 at `t = 0`.
    #[default]
    Sinc,
    /// 1 when the delay falls exactly on a tap, 0 elsewhere.
    Delta,
}

impl Pulse {
    /// Pulse value at time offset `t` for sample period `ts`.
    pub fn eval(self, t: f64, ts: f64) -> f64 {
        let x = t / ts;
        match self {
            Pulse::Sinc => {
                if x.abs() < 1e-12 {
                    1.0
                } else {
                    (PI * x).sin() / (PI * x)
                }
            }
            Pulse::Delta => {
                if x.abs() < 1e-9 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Scenario parameters shared by every realization of a sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub geometry: ArrayGeometry,
    /// Rays per link, L.
    pub num_paths: usize,
    /// OFDM subcarriers, K.
    pub num_subcarriers: usize,
    /// Delay taps, D.
    pub num_taps: usize,
    /// Tap spacing Ts in seconds.
    pub sample_period: f64,
    #[serde(default = "default_path_loss")]
    pub path_loss: f64,
    #[serde(default)]
    pub pulse: Pulse,
    /// Standard deviation of the per-sample angular drift, radians.
    #[serde(default)]
    pub trajectory_step: f64,
}

fn default_path_loss() -> f64 {
    1.0
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if self.num_paths == 0 {
            return bad("num_paths must be >= 1");
        }
        if self.num_subcarriers == 0 {
            return bad("num_subcarriers must be >= 1");
        }
        if self.num_taps == 0 {
            return bad("num_taps must be >= 1");
        }
        if !(self.sample_period > 0.0 && self.sample_period.is_finite()) {
            return bad("sample_period must be positive");
        }
        if !(self.path_loss > 0.0 && self.path_loss.is_finite()) {
            return bad("path_loss must be positive");
        }
        if !(self.trajectory_step >= 0.0 && self.trajectory_step.is_finite()) {
            return bad("trajectory_step must be non-negative");
        }
        Ok(())
    }

    /// Length of the modeled delay window, `D * Ts`.
    pub fn tap_window(&self) -> f64 {
        self.num_taps as f64 * self.sample_period
    }
}

/// Transmitter-to-RIS and RIS-to-receiver channels over all subcarriers.
///
/// Column `k` of `h_t` is the M-element channel on subcarrier `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    h_t: Array2<Complex64>,
    h_r: Array2<Complex64>,
}

impl ChannelRealization {
    pub fn new(h_t: Array2<Complex64>, h_r: Array2<Complex64>) -> Result<Self> {
        if h_t.dim() != h_r.dim() {
            return Err(Error::shape(
                "channel realization",
                format!("{:?}", h_t.dim()),
                format!("{:?}", h_r.dim()),
            ));
        }
        if h_t
            .iter()
            .chain(h_r.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidConfig("channel contains non-finite entries".into()));
        }
        Ok(Self { h_t, h_r })
    }

    pub fn h_t(&self) -> &Array2<Complex64> {
        &self.h_t
    }

    pub fn h_r(&self) -> &Array2<Complex64> {
        &self.h_r
    }

    pub fn num_elements(&self) -> usize {
        self.h_t.nrows()
    }

    pub fn num_subcarriers(&self) -> usize {
        self.h_t.ncols()
    }
}

/// Frequency response of one link as an `M x K` matrix.
///
/// Rejects an empty ray list and any delay outside `[0, D Ts)`.
pub fn generate_channel(
    config: &ScenarioConfig,
    rays: &[RayPath],
    subcarrier_count: usize,
) -> Result<Array2<Complex64>> {
    config.validate()?;
    if rays.is_empty() {
        return Err(Error::InvalidConfig("at least one ray is required".into()));
    }
    if subcarrier_count == 0 {
        return Err(Error::InvalidConfig("subcarrier_count must be >= 1".into()));
    }
    let window = config.tap_window();
    for (i, ray) in rays.iter().enumerate() {
        if !(ray.delay >= 0.0 && ray.delay < window) {
            return Err(Error::DelayOutOfWindow {
                ray: i,
                delay: ray.delay,
                window,
            });
        }
    }

    let m = config.geometry.num_elements();
    let k_count = subcarrier_count;
    let ts = config.sample_period;
    let scale = (m as f64 / config.path_loss).sqrt();

    // Per-tap subcarrier rotations, shared by every ray.
    let twiddle = Array2::from_shape_fn((config.num_taps, k_count), |(d, k)| {
        let arg = -TAU * ((k * d) % k_count) as f64 / k_count as f64;
        Complex64::from_polar(1.0, arg)
    });

    let mut h = Array2::<Complex64>::zeros((m, k_count));
    for ray in rays {
        let response = array_response(&config.geometry, ray.azimuth, ray.elevation);
        // Frequency profile of this ray: sum over taps of p(d Ts - τ) e^{-j2πkd/K}.
        let mut profile = vec![Complex64::new(0.0, 0.0); k_count];
        for d in 0..config.num_taps {
            let p = config.pulse.eval(d as f64 * ts - ray.delay, ts);
            if p == 0.0 {
                continue;
            }
            for (k, slot) in profile.iter_mut().enumerate() {
                *slot += twiddle[(d, k)] * p;
            }
        }
        for (mi, a) in response.iter().enumerate() {
            let weighted = ray.gain * a * scale;
            for (k, f) in profile.iter().enumerate() {
                h[(mi, k)] += weighted * f;
            }
        }
    }
    Ok(h)
}
