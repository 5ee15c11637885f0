//! Active-element channel sampling.
//!
//! A few RIS elements carry receive chains. The selection operator keeps
//! their rows of both link channels, and the sampled channel is the
//! elementwise product of those rows.

use ndarray::Array2;
use num_complex::Complex64;
use rand::seq::index;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};
use crate::seed::{self, SimRng};

/// Row-selection operator, stored as the sorted active element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionMatrix {
    active_indices: Vec<usize>,
}

impl SelectionMatrix {
    /// Validates that `indices` are strictly increasing and below `num_elements`.
    pub fn new(indices: Vec<usize>, num_elements: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidConfig(
                "selection needs at least one active element".into(),
            ));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= num_elements) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: num_elements,
            });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "active indices must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            active_indices: indices,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.active_indices
    }

    /// Number of active elements, M̄.
    pub fn len(&self) -> usize {
        self.active_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active_indices.is_empty()
    }

    fn gather(&self, h: &Array2<Complex64>) -> Result<Array2<Complex64>> {
        let m = h.nrows();
        if let Some(&bad) = self.active_indices.iter().find(|&&i| i >= m) {
            return Err(Error::IndexOutOfRange { index: bad, len: m });
        }
        Ok(Array2::from_shape_fn((self.len(), h.ncols()), |(r, k)| {
            h[(self.active_indices[r], k)]
        }))
    }
}

/// Channel observed at the active elements, `M̄ x K`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledChannel {
    pub h_bar: Array2<Complex64>,
}

impl SampledChannel {
    pub fn num_active(&self) -> usize {
        self.h_bar.nrows()
    }

    pub fn num_subcarriers(&self) -> usize {
        self.h_bar.ncols()
    }
}

/// Draws `m_bar` distinct active elements uniformly out of `m`.
pub fn select_active_elements(m: usize, m_bar: usize, seed: u64) -> Result<SelectionMatrix> {
    if m_bar == 0 || m_bar > m {
        return Err(Error::InvalidConfig(format!(
            "active element count must lie in [1, {m}], got {m_bar}"
        )));
    }
    let mut rng = seed::rng(seed);
    let mut picked = index::sample(&mut rng, m, m_bar).into_vec();
    picked.sort_unstable();
    SelectionMatrix::new(picked, m)
}

/// Exact sampled channel: selected rows of `h_t` times selected rows of `h_r`.
pub fn sampled_channel(selection: &SelectionMatrix, realization: &ChannelRealization) -> Result<SampledChannel> {
    let t = selection.gather(realization.h_t())?;
    let r = selection.gather(realization.h_r())?;
    Ok(SampledChannel { h_bar: t * r })
}

/// Sampled channel as estimated from pilots at a finite estimation SNR.
///
/// Each link's active-element observations get circularly symmetric Gaussian
/// noise whose variance is the mean observed power of that link divided by
/// `pilot_snr` (linear). The noisy link estimates are then multiplied.
pub fn estimate_sampled_channel(
    selection: &SelectionMatrix,
    realization: &ChannelRealization,
    pilot_snr: f64,
    rng: &mut SimRng,
) -> Result<SampledChannel> {
    if pilot_snr.is_nan() || pilot_snr <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "pilot_snr must be positive, got {pilot_snr}"
        )));
    }
    let mut noisy = |h: &Array2<Complex64>| -> Result<Array2<Complex64>> {
        let mut obs = selection.gather(h)?;
        let power = obs.iter().map(|z| z.norm_sqr()).sum::<f64>() / obs.len() as f64;
        let sigma = (power / pilot_snr / 2.0).sqrt();
        for z in obs.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *z += Complex64::new(re * sigma, im * sigma);
        }
        Ok(obs)
    };
    let t = noisy(realization.h_t())?;
    let r = noisy(realization.h_r())?;
    Ok(SampledChannel { h_bar: t * r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ris::cascade;

    fn realization(m: usize, k: usize) -> ChannelRealization {
        let h_t = Array2::from_shape_fn((m, k), |(i, j)| Complex64::new(i as f64 + 1.0, j as f64));
        let h_r = Array2::from_shape_fn((m, k), |(i, j)| Complex64::new(0.5, i as f64 - j as f64));
        ChannelRealization::new(h_t, h_r).unwrap()
    }

    #[test]
    fn full_selection() {
        let s = select_active_elements(4, 4, 1).unwrap();
        assert_eq!(s.indices(), &[0, 1, 2, 3]);
        let r = realization(4, 3);
        assert_eq!(sampled_channel(&s, &r).unwrap().h_bar, cascade(&r).unwrap());
    }

    #[test]
    fn single_first_row() {
        let s = SelectionMatrix::new(vec![0], 2).unwrap();
        let r = realization(2, 3);
        let c = cascade(&r).unwrap();
        assert_eq!(sampled_channel(&s, &r).unwrap().h_bar.row(0), c.row(0));
    }

    #[test]
    fn deterministic_selection() {
        let a = select_active_elements(1024, 8, 77).unwrap();
        let b = select_active_elements(1024, 8, 77).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!(a.indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_selections() {
        assert!(select_active_elements(4, 5, 0).is_err());
        assert!(select_active_elements(4, 0, 0).is_err());
        assert!(matches!(
            SelectionMatrix::new(vec![1, 4], 4),
            Err(Error::IndexOutOfRange { index: 4, len: 4 })
        ));
        assert!(SelectionMatrix::new(vec![2, 1], 4).is_err());
        let s = SelectionMatrix::new(vec![0, 5], 8).unwrap();
        assert!(matches!(
            sampled_channel(&s, &realization(4, 2)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn estimation_noise_shrinks_with_pilot_snr() {
        let r = realization(6, 4);
        let s = SelectionMatrix::new(vec![1, 3, 4], 6).unwrap();
        let exact = sampled_channel(&s, &r).unwrap().h_bar;
        let err = |snr: f64| {
            let mut rng = seed::rng(3);
            let est = estimate_sampled_channel(&s, &r, snr, &mut rng).unwrap().h_bar;
            (&est - &exact).iter().map(|z| z.norm_sqr()).sum::<f64>()
        };
        assert!(err(1e6) < err(1.0));
        assert!(err(1e12) < 1e-6);
    }
}
