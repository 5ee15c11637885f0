use ndarray::Array1;
use num_complex::Complex64;

use super::network::{MlpModel, Mode};
use crate::error::{Error, Result};
use crate::ris::{first_argmax, Codebook};

/// Run-time beam choice: predicts the rate vector from the history window and
/// returns the first best-scoring codebook index with its interaction vector.
pub fn predict_beam(
    model: &MlpModel,
    history_input: &[f64],
    codebook: &Codebook,
) -> Result<(usize, Array1<Complex64>)> {
    if model.mode != Mode::Infer {
        return Err(Error::NotInferenceMode);
    }
    let out_w = model.architecture().output_width();
    if out_w != codebook.size() {
        return Err(Error::shape("predicted rate vector", codebook.size(), out_w));
    }
    let scores = super::forward(model, history_input, false, 0)?;
    let (index, _) = first_argmax(scores.as_slice().expect("contiguous"))
        .ok_or_else(|| Error::InvalidConfig("network produced no finite score".into()))?;
    Ok((index, codebook.beam(index).to_owned()))
}
