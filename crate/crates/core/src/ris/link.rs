use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};

/// Tolerance on `|ψ_m| = 1` for phase-shifter interaction vectors.
pub const UNIT_MODULUS_TOL: f64 = 1e-12;

/// Transmit power, receiver noise, and the subcarrier count that splits power.
///
/// The per-subcarrier SNR is `P_T / (K σ²)`, since each subcarrier carries
/// `P_T / K` of the transmit power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    /// Total transmit power P_T, linear.
    pub total_power: f64,
    /// Noise power σ², linear.
    pub noise_power: f64,
    pub num_subcarriers: usize,
}

impl LinkBudget {
    pub fn new(total_power: f64, noise_power: f64, num_subcarriers: usize) -> Result<Self> {
        let b = Self {
            total_power,
            noise_power,
            num_subcarriers,
        };
        b.validate()?;
        Ok(b)
    }

    /// Budget with unit noise power whose per-subcarrier SNR equals `snr`.
    pub fn from_snr(snr: f64, num_subcarriers: usize) -> Result<Self> {
        Self::new(snr * num_subcarriers as f64, 1.0, num_subcarriers)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.total_power > 0.0 && self.total_power.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "total_power must be positive, got {}",
                self.total_power
            )));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise_power must be positive, got {}",
                self.noise_power
            )));
        }
        if self.num_subcarriers == 0 {
            return Err(Error::InvalidConfig("num_subcarriers must be >= 1".into()));
        }
        Ok(())
    }

    pub fn snr(&self) -> f64 {
        self.total_power / (self.num_subcarriers as f64 * self.noise_power)
    }
}

/// Cascaded channel: column `k` is `h_T,k ⊙ h_R,k`.
pub fn cascade(realization: &ChannelRealization) -> Result<Array2<Complex64>> {
    let (h_t, h_r) = (realization.h_t(), realization.h_r());
    if h_t.dim() != h_r.dim() {
        return Err(Error::shape(
            "cascade",
            format!("{:?}", h_t.dim()),
            format!("{:?}", h_r.dim()),
        ));
    }
    Ok(h_t * h_r)
}

pub(crate) fn check_unit_modulus(psi: ArrayView1<Complex64>) -> Result<()> {
    for (index, z) in psi.iter().enumerate() {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > UNIT_MODULUS_TOL || !modulus.is_finite() {
            return Err(Error::NonUnitModulus { index, modulus });
        }
    }
    Ok(())
}

/// Received samples `y_k = h_R,k^T diag(ψ) h_T,k s_k + n_k`.
pub fn received_signal(
    realization: &ChannelRealization,
    psi: ArrayView1<Complex64>,
    symbols: ArrayView1<Complex64>,
    noise: ArrayView1<Complex64>,
) -> Result<Array1<Complex64>> {
    let m = realization.num_elements();
    let k = realization.num_subcarriers();
    if psi.len() != m {
        return Err(Error::shape("received_signal psi", m, psi.len()));
    }
    if symbols.len() != k || noise.len() != k {
        return Err(Error::shape(
            "received_signal symbols/noise",
            k,
            format!("{}/{}", symbols.len(), noise.len()),
        ));
    }
    check_unit_modulus(psi)?;
    let y = (0..k)
        .map(|kk| {
            // Ψ h_T,k: the diagonal interaction matrix scales each element.
            let reflected = &psi * &realization.h_t().column(kk);
            realization.h_r().column(kk).dot(&reflected) * symbols[kk] + noise[kk]
        })
        .collect();
    Ok(y)
}

/// Mean rate over subcarriers given the cascade transposed to `K x M`.
pub(crate) fn rate_from_rows(cascade_rows: &Array2<Complex64>, psi: ArrayView1<Complex64>, snr: f64) -> f64 {
    let k = cascade_rows.nrows();
    let total: f64 = cascade_rows
        .rows()
        .into_iter()
        .map(|c| (1.0 + snr * c.dot(&psi).norm_sqr()).log2())
        .sum();
    total / k as f64
}

pub(crate) fn check_rate_shapes(cascade: &Array2<Complex64>, psi_len: usize, budget: &LinkBudget) -> Result<()> {
    budget.validate()?;
    if psi_len != cascade.nrows() {
        return Err(Error::shape("achievable_rate psi", cascade.nrows(), psi_len));
    }
    if budget.num_subcarriers != cascade.ncols() {
        return Err(Error::shape(
            "achievable_rate subcarriers",
            budget.num_subcarriers,
            cascade.ncols(),
        ));
    }
    Ok(())
}

/// Achievable rate in bits/s/Hz: `(1/K) Σ_k log2(1 + SNR |c_k^T ψ|²)`.
pub fn achievable_rate(cascade: &Array2<Complex64>, psi: ArrayView1<Complex64>, budget: &LinkBudget) -> Result<f64> {
    check_rate_shapes(cascade, psi.len(), budget)?;
    let rows = cascade.t().as_standard_layout().into_owned();
    Ok(rate_from_rows(&rows, psi, budget.snr()))
}
