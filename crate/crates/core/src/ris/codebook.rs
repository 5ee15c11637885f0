//! Beamsteering codebooks for phase-shifter RIS elements.
//!
//! The DFT codebook is the Kronecker product of per-axis DFT beam sets. A
//! per-axis set of `c` beams on an `N`-element axis uses spatial frequencies
//! `b / c`, `b = 0..c`, so `c < N` subsamples the DFT grid and `c > N`
//! oversamples it. The per-axis counts are chosen so their product equals
//! the requested size while keeping each axis' sampling ratio as even as
//! possible. A 1024-beam codebook therefore exists for both 32x32 and 48x48
//! surfaces.

use std::f64::consts::TAU;

use ndarray::{Array2, ArrayView1};
use num_complex::Complex64;

use super::link::check_unit_modulus;
use crate::channel::ArrayGeometry;
use crate::error::{Error, Result};

/// Candidate interaction vectors, one per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    vectors: Array2<Complex64>,
}

impl Codebook {
    /// Wraps an `M x P` matrix after checking every entry has unit modulus.
    pub fn new(vectors: Array2<Complex64>) -> Result<Self> {
        if vectors.ncols() == 0 || vectors.nrows() == 0 {
            return Err(Error::InvalidConfig(
                "codebook must hold at least one non-empty vector".into(),
            ));
        }
        for col in vectors.columns() {
            check_unit_modulus(col)?;
        }
        Ok(Self { vectors })
    }

    pub fn vectors(&self) -> &Array2<Complex64> {
        &self.vectors
    }

    /// Number of candidate vectors, |P|.
    pub fn size(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn num_elements(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn beam(&self, index: usize) -> ArrayView1<'_, Complex64> {
        self.vectors.column(index)
    }

    /// Same vectors in a new column order: column `i` of the result is column
    /// `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.size() {
            return Err(Error::shape("codebook permutation", self.size(), order.len()));
        }
        let vectors = Array2::from_shape_fn(self.vectors.dim(), |(m, i)| self.vectors[(m, order[i])]);
        Ok(Self { vectors })
    }
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

/// Per-axis beam counts whose product is `size`.
pub(crate) fn axis_beam_counts(dims: [usize; 3], size: usize) -> [usize; 3] {
    let m: usize = dims.iter().product();
    let active: Vec<usize> = (0..3).filter(|&a| dims[a] > 1).collect();
    if active.is_empty() {
        return [size, 1, 1];
    }
    let target = (size as f64 / m as f64).ln() / active.len() as f64;
    let mut best = [size, 1, 1];
    let mut best_score = f64::INFINITY;
    for cx in divisors(size) {
        for cy in divisors(size / cx) {
            let cz = size / cx / cy;
            let counts = [cx, cy, cz];
            let mut score = 0.0;
            for a in 0..3 {
                if dims[a] > 1 {
                    let dev = (counts[a] as f64).ln() - (dims[a] as f64).ln() - target;
                    score += dev * dev;
                } else if counts[a] > 1 {
                    // Beams along a single-element axis are all identical.
                    score += 1e6 * (counts[a] as f64).ln();
                }
            }
            if score < best_score - 1e-12 {
                best_score = score;
                best = counts;
            }
        }
    }
    best
}

/// Kronecker DFT codebook with `size` beams for `geometry`.
///
/// Beam `(bx, by, bz)` is column `bx + cx * (by + cy * bz)` and has entries
/// `exp(-j 2π (mx bx / cx + my by / cy + mz bz / cz))`.
pub fn build_dft_codebook(geometry: &ArrayGeometry, size: usize) -> Result<Codebook> {
    geometry.validate()?;
    if size == 0 {
        return Err(Error::InvalidConfig("codebook size must be >= 1".into()));
    }
    let counts = axis_beam_counts(geometry.dims, size);
    let m = geometry.num_elements();
    let vectors = Array2::from_shape_fn((m, size), |(elem, n)| {
        let coords = geometry.coords(elem);
        let beam = [n % counts[0], (n / counts[0]) % counts[1], n / (counts[0] * counts[1])];
        let phase: f64 = (0..3)
            .map(|a| coords[a] as f64 * beam[a] as f64 / counts[a] as f64)
            .sum();
        Complex64::from_polar(1.0, -TAU * phase)
    });
    Codebook::new(vectors)
}
