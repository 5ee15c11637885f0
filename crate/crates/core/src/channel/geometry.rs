use std::f64::consts::TAU;

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform planar (or linear, or cubic) element grid of the RIS.
///
/// Elements are flattened x-fastest: element `(mx, my, mz)` sits at index
/// `mx + Mx * (my + My * mz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    /// Element counts along x, y and z.
    pub dims: [usize; 3],
    /// Inter-element spacing in wavelengths.
    #[serde(default = "default_spacing")]
    pub spacing: f64,
}

fn default_spacing() -> f64 {
    0.5
}

impl ArrayGeometry {
    pub fn new(dims: [usize; 3], spacing: f64) -> Result<Self> {
        let g = Self { dims, spacing };
        g.validate()?;
        Ok(g)
    }

    /// Half-wavelength spaced grid.
    pub fn upa(mx: usize, my: usize, mz: usize) -> Result<Self> {
        Self::new([mx, my, mz], 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "array dimensions must all be >= 1, got {:?}",
                self.dims
            )));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "element spacing must be positive, got {}",
                self.spacing
            )));
        }
        Ok(())
    }

    /// Total element count M.
    pub fn num_elements(&self) -> usize {
        self.dims.iter().product()
    }

    /// Splits a flat element index into per-axis coordinates.
    pub fn coords(&self, index: usize) -> [usize; 3] {
        let [mx, my, _] = self.dims;
        [index % mx, (index / mx) % my, index / (mx * my)]
    }
}

/// Steering vector of the array toward (`azimuth`, `elevation`).
///
/// Entry `(mx, my, mz)` is
/// `exp(j 2π d (mx cos(el) cos(az) + my cos(el) sin(az) + mz sin(el)))`
/// with `d` the spacing in wavelengths. Angles are wrapped into `[0, 2π)`
/// first; both angles may range over the full circle.
pub fn array_response(geometry: &ArrayGeometry, azimuth: f64, elevation: f64) -> Array1<Complex64> {
    let az = azimuth.rem_euclid(TAU);
    let el = elevation.rem_euclid(TAU);
    let scale = TAU * geometry.spacing;
    let ux = scale * el.cos() * az.cos();
    let uy = scale * el.cos() * az.sin();
    let uz = scale * el.sin();
    Array1::from_shape_fn(geometry.num_elements(), |m| {
        let [mx, my, mz] = geometry.coords(m);
        Complex64::from_polar(1.0, ux * mx as f64 + uy * my as f64 + uz * mz as f64)
    })
}
