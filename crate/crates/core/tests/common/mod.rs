//! Straight-line reference implementations shared by the integration tests.
//!
//! Everything here is written from the defining formulas with plain loops
//! and no calls into the library's numerical code, so agreement with the
//! library is evidence rather than tautology.

#![allow(dead_code)]

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use risbeam::channel::{ArrayGeometry, Pulse, RayPath, ScenarioConfig};
use risbeam::seed::SimRng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut SimRng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut SimRng, rows: usize, cols: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |_| random_complex(rng))
}

pub fn random_phases(rng: &mut SimRng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)))
        .collect()
}

/// `max |a - b| / max |b|`, with an absolute floor for all-zero references.
pub fn max_rel_err<'a>(
    a: impl IntoIterator<Item = &'a Complex64>,
    b: impl IntoIterator<Item = &'a Complex64> + Clone,
) -> f64 {
    let scale = b.clone().into_iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
    a.into_iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

pub fn steering(geometry: &ArrayGeometry, azimuth: f64, elevation: f64) -> Vec<Complex64> {
    let [mx_n, my_n, mz_n] = geometry.dims;
    let mut out = Vec::with_capacity(mx_n * my_n * mz_n);
    for mz in 0..mz_n {
        for my in 0..my_n {
            for mx in 0..mx_n {
                let phase = 2.0
                    * PI
                    * geometry.spacing
                    * (mx as f64 * elevation.cos() * azimuth.cos()
                        + my as f64 * elevation.cos() * azimuth.sin()
                        + mz as f64 * elevation.sin());
                out.push(Complex64::from_polar(1.0, phase));
            }
        }
    }
    out
}

pub fn pulse(kind: Pulse, t: f64, ts: f64) -> f64 {
    match kind {
        Pulse::Sinc => {
            if t == 0.0 {
                1.0
            } else {
                let x = PI * t / ts;
                x.sin() / x
            }
        }
        Pulse::Delta => {
            if (t / ts).abs() < 1e-9 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Direct double sum over taps and rays for every (element, subcarrier).
pub fn channel_double_sum(config: &ScenarioConfig, rays: &[RayPath], k_count: usize) -> Array2<Complex64> {
    let m = config.geometry.num_elements();
    let scale = (m as f64 / config.path_loss).sqrt();
    let responses: Vec<Vec<Complex64>> = rays
        .iter()
        .map(|r| steering(&config.geometry, r.azimuth, r.elevation))
        .collect();
    let mut h = Array2::zeros((m, k_count));
    for mi in 0..m {
        for k in 0..k_count {
            let mut acc = c(0.0, 0.0);
            for d in 0..config.num_taps {
                for (l, ray) in rays.iter().enumerate() {
                    let p = pulse(
                        config.pulse,
                        d as f64 * config.sample_period - ray.delay,
                        config.sample_period,
                    );
                    let rot = Complex64::from_polar(1.0, -2.0 * PI * (k * d) as f64 / k_count as f64);
                    acc += ray.gain * responses[l][mi] * p * rot;
                }
            }
            h[(mi, k)] = scale * acc;
        }
    }
    h
}

/// `(1/K) Σ_k log2(1 + snr |Σ_m c[m,k] ψ_m|²)`.
pub fn rate(cascade: &Array2<Complex64>, psi: &[Complex64], snr: f64) -> f64 {
    let (m, k_count) = cascade.dim();
    let mut total = 0.0;
    for k in 0..k_count {
        let mut g = c(0.0, 0.0);
        for mi in 0..m {
            g += cascade[(mi, k)] * psi[mi];
        }
        total += (1.0 + snr * g.norm_sqr()).log2();
    }
    total / k_count as f64
}

/// Rate of every beam and the first index attaining the maximum.
pub fn search(cascade: &Array2<Complex64>, beams: &[Vec<Complex64>], snr: f64) -> (usize, Vec<f64>) {
    let rates: Vec<f64> = beams.iter().map(|b| rate(cascade, b, snr)).collect();
    let mut best = 0;
    for n in 1..rates.len() {
        if rates[n] > rates[best] {
            best = n;
        }
    }
    (best, rates)
}
