use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use super::codebook::Codebook;
use super::link::{check_rate_shapes, rate_from_rows, LinkBudget};
use crate::error::{Error, Result};

/// Achievable rate of every codebook entry plus the optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    /// Rate of beam `n`, bits/s/Hz.
    pub rates: Vec<f64>,
    /// First index attaining the maximum rate.
    pub best_index: usize,
    pub best_rate: f64,
}

impl RateVector {
    /// Builds from raw rates, picking the lowest index among ties.
    pub fn from_rates(rates: Vec<f64>) -> Result<Self> {
        let (best_index, best_rate) =
            first_argmax(&rates).ok_or_else(|| Error::InvalidConfig("rate vector must not be empty".into()))?;
        Ok(Self {
            rates,
            best_index,
            best_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

/// Index and value of the first maximum. NaN entries never win.
pub fn first_argmax(values: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best
}

/// Evaluates every beam of `codebook` on `cascade` and returns the rate
/// vector with the optimal beam.
///
/// Beams are rated in parallel. The optimum is chosen afterwards by comparing
/// rates in index order, so the result does not depend on scheduling.
pub fn exhaustive_search(cascade: &Array2<Complex64>, codebook: &Codebook, budget: &LinkBudget) -> Result<RateVector> {
    check_rate_shapes(cascade, codebook.num_elements(), budget)?;
    let rows: Array2<Complex64> = cascade.t().as_standard_layout().into_owned();
    let snr = budget.snr();
    let rates: Vec<f64> = (0..codebook.size())
        .into_par_iter()
        .map(|n| rate_from_rows(&rows, codebook.beam(n), snr))
        .collect();
    RateVector::from_rates(rates)
}
