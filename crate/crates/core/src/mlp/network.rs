//! Dense ReLU network with inverted dropout and mean-squared-error loss.
//!
//! Weights of layer `l` are stored `in x out` so a batch `X` (rows are
//! samples) maps to `X W + b`. Training cost per epoch is
//! `O(n · Σ w_l w_{l+1})` for `n` samples, and inference costs roughly a
//! third of a training step.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;

use super::config::MlpArchitecture;
use crate::error::{Error, Result};
use crate::seed::{self, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Infer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    architecture: MlpArchitecture,
    weights: Vec<Array2<f64>>,
    biases: Vec<Array1<f64>>,
    pub mode: Mode,
}

/// Parameter gradients, shaped like the model's weights and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Pre-activations and dropout masks recorded by a batched forward pass.
struct Trace {
    /// Input followed by the (masked) output of each hidden layer.
    activations: Vec<Array2<f64>>,
    pre_activations: Vec<Array2<f64>>,
    /// Per hidden layer, entries `0` or `1 / keep`.
    masks: Vec<Option<Array2<f64>>>,
    output: Array2<f64>,
}

/// Weights uniform in `±sqrt(6 / (fan_in + fan_out))`, biases zero.
pub fn init_model(architecture: &MlpArchitecture, seed: u64) -> Result<MlpModel> {
    architecture.validate()?;
    let mut rng = seed::rng(seed);
    let widths = &architecture.layer_widths;
    let mut weights = Vec::with_capacity(architecture.num_layers());
    let mut biases = Vec::with_capacity(architecture.num_layers());
    for pair in widths.windows(2) {
        let (fan_in, fan_out) = (pair[0], pair[1]);
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        weights.push(Array2::from_shape_simple_fn((fan_in, fan_out), || {
            rng.random_range(-limit..=limit)
        }));
        biases.push(Array1::zeros(fan_out));
    }
    Ok(MlpModel {
        architecture: architecture.clone(),
        weights,
        biases,
        mode: Mode::Train,
    })
}

impl MlpModel {
    /// Assembles a model from explicit parameters, checking shapes and finiteness.
    pub fn from_parameters(
        architecture: MlpArchitecture,
        weights: Vec<Array2<f64>>,
        biases: Vec<Array1<f64>>,
        mode: Mode,
    ) -> Result<Self> {
        architecture.validate()?;
        let n = architecture.num_layers();
        if weights.len() != n || biases.len() != n {
            return Err(Error::shape(
                "model layers",
                n,
                format!("{}/{}", weights.len(), biases.len()),
            ));
        }
        for (l, pair) in architecture.layer_widths.windows(2).enumerate() {
            if weights[l].dim() != (pair[0], pair[1]) || biases[l].len() != pair[1] {
                return Err(Error::shape(
                    "layer parameters",
                    format!("{}x{}", pair[0], pair[1]),
                    format!("{:?}+{}", weights[l].dim(), biases[l].len()),
                ));
            }
        }
        let model = Self {
            architecture,
            weights,
            biases,
            mode,
        };
        if !model.is_finite() {
            return Err(Error::InvalidConfig("model parameters must be finite".into()));
        }
        Ok(model)
    }

    pub fn architecture(&self) -> &MlpArchitecture {
        &self.architecture
    }

    pub fn weights(&self) -> &[Array2<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Array1<f64>] {
        &self.biases
    }

    pub fn weights_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Array1<f64>] {
        &mut self.biases
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(|w| w.iter().all(|v| v.is_finite()))
            && self.biases.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    pub fn num_parameters(&self) -> usize {
        self.weights.iter().map(|w| w.len()).sum::<usize>() + self.biases.iter().map(|b| b.len()).sum::<usize>()
    }

    /// Half the squared Frobenius norm of all weights (biases excluded).
    pub fn weight_penalty(&self) -> f64 {
        0.5 * self
            .weights
            .iter()
            .map(|w| w.iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
    }

    fn check_input_width(&self, width: usize) -> Result<()> {
        let want = self.architecture.input_width();
        if width != want {
            return Err(Error::shape("network input", want, width));
        }
        Ok(())
    }

    fn trace(&self, inputs: ArrayView2<f64>, mut dropout: Option<&mut SimRng>) -> Trace {
        let last = self.weights.len() - 1;
        let rate = self.architecture.dropout_rate;
        let keep = 1.0 - rate;
        let mut activations = vec![inputs.to_owned()];
        let mut pre_activations = Vec::with_capacity(last);
        let mut masks = Vec::with_capacity(last);
        for l in 0..last {
            let z = activations[l].dot(&self.weights[l]) + &self.biases[l];
            let mut a = z.mapv(|v| v.max(0.0));
            let mask = match dropout.as_deref_mut() {
                Some(rng) if rate > 0.0 => {
                    let m = Array2::from_shape_simple_fn(a.dim(), || {
                        if rng.random::<f64>() < keep {
                            1.0 / keep
                        } else {
                            0.0
                        }
                    });
                    a *= &m;
                    Some(m)
                }
                _ => None,
            };
            pre_activations.push(z);
            masks.push(mask);
            activations.push(a);
        }
        let output = activations[last].dot(&self.weights[last]) + &self.biases[last];
        Trace {
            activations,
            pre_activations,
            masks,
            output,
        }
    }

    /// Deterministic batched inference; rows of `inputs` are samples.
    pub fn predict_batch(&self, inputs: ArrayView2<f64>) -> Result<Array2<f64>> {
        self.check_input_width(inputs.ncols())?;
        Ok(self.trace(inputs, None).output)
    }

    /// Batched forward pass with dropout drawn from `rng` when given.
    pub fn forward_batch(&self, inputs: ArrayView2<f64>, dropout: Option<&mut SimRng>) -> Result<Array2<f64>> {
        self.check_input_width(inputs.ncols())?;
        Ok(self.trace(inputs, dropout).output)
    }

    /// Mean-squared-error data loss of a batch and its parameter gradients,
    /// including the `l2` weight-decay term in both.
    pub fn loss_and_gradients(
        &self,
        inputs: ArrayView2<f64>,
        targets: ArrayView2<f64>,
        l2: f64,
        dropout: Option<&mut SimRng>,
    ) -> Result<(f64, Gradients)> {
        self.check_input_width(inputs.ncols())?;
        let out_w = self.architecture.output_width();
        if targets.dim() != (inputs.nrows(), out_w) {
            return Err(Error::shape(
                "network targets",
                format!("{}x{}", inputs.nrows(), out_w),
                format!("{:?}", targets.dim()),
            ));
        }
        let trace = self.trace(inputs, dropout);
        let diff = &trace.output - &targets;
        let count = diff.len() as f64;
        let data_loss = diff.iter().map(|v| v * v).sum::<f64>() / count;
        let loss = data_loss + l2 * self.weight_penalty();

        let n_layers = self.weights.len();
        let mut grad_w = vec![Array2::zeros((0, 0)); n_layers];
        let mut grad_b = vec![Array1::zeros(0); n_layers];
        let mut delta = diff * (2.0 / count);
        for l in (0..n_layers).rev() {
            let mut gw = trace.activations[l].t().dot(&delta);
            if l2 != 0.0 {
                gw.scaled_add(l2, &self.weights[l]);
            }
            grad_w[l] = gw;
            grad_b[l] = delta.sum_axis(Axis(0));
            if l > 0 {
                let mut back = delta.dot(&self.weights[l].t());
                if let Some(mask) = &trace.masks[l - 1] {
                    back *= mask;
                }
                back.zip_mut_with(&trace.pre_activations[l - 1], |g, &z| {
                    if z <= 0.0 {
                        *g = 0.0;
                    }
                });
                delta = back;
            }
        }
        Ok((
            loss,
            Gradients {
                weights: grad_w,
                biases: grad_b,
            },
        ))
    }
}

/// Single-sample forward pass.
///
/// With `training_mode` set, inverted dropout masks are drawn from `seed`;
/// otherwise the pass is deterministic and `seed` is ignored.
pub fn forward(model: &MlpModel, input: &[f64], training_mode: bool, seed: u64) -> Result<Array1<f64>> {
    let x = ArrayView2::from_shape((1, input.len()), input).expect("row view");
    let out = if training_mode {
        let mut rng = seed::rng(seed);
        model.forward_batch(x, Some(&mut rng))?
    } else {
        model.predict_batch(x)?
    };
    Ok(out.row(0).to_owned())
}

/// `mean((prediction - target)^2) + l2 * Σ w² / 2`.
pub fn loss(prediction: ArrayView1<f64>, target: ArrayView1<f64>, model: &MlpModel, l2: f64) -> Result<f64> {
    if prediction.len() != target.len() || prediction.is_empty() {
        return Err(Error::shape("loss", prediction.len(), target.len()));
    }
    let mse = prediction
        .iter()
        .zip(target.iter())
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / prediction.len() as f64;
    Ok(mse + l2 * model.weight_penalty())
}

#[cfg(test)]
mod tests {
    use ndarray::array;

    use super::*;

    fn arch(widths: &[usize], dropout: f64) -> MlpArchitecture {
        MlpArchitecture::new(widths.to_vec(), dropout).unwrap()
    }

    #[test]
    fn init_is_deterministic_with_zero_biases() {
        let a = arch(&[5, 4, 3, 2], 0.5);
        let m1 = init_model(&a, 9).unwrap();
        let m2 = init_model(&a, 9).unwrap();
        assert_eq!(m1, m2);
        assert_ne!(m1, init_model(&a, 10).unwrap());
        assert!(m1.biases().iter().all(|b| b.iter().all(|&v| v == 0.0)));
        for (w, pair) in m1.weights().iter().zip(a.layer_widths.windows(2)) {
            let limit = (6.0 / (pair[0] + pair[1]) as f64).sqrt();
            assert!(w.iter().all(|v| v.abs() <= limit));
        }
    }

    #[test]
    fn init_mean_within_standard_error() {
        let a = arch(&[1024, 1024, 8, 4], 0.0);
        let m = init_model(&a, 1).unwrap();
        let w = &m.weights()[0];
        let n = w.len() as f64;
        let limit = (6.0f64 / 2048.0).sqrt();
        // Uniform(-a, a) has variance a^2 / 3.
        let se = (limit * limit / 3.0 / n).sqrt();
        let mean = w.sum() / n;
        assert!(mean.abs() < 3.0 * se, "mean {mean} vs 3se {}", 3.0 * se);
    }

    #[test]
    fn zero_parameters_give_zero_output() {
        let a = arch(&[3, 4, 4, 2], 0.5);
        let mut m = init_model(&a, 0).unwrap();
        m.weights_mut().iter_mut().for_each(|w| w.fill(0.0));
        let out = forward(&m, &[1.0, -2.0, 3.0], false, 0).unwrap();
        assert_eq!(out.to_vec(), vec![0.0, 0.0]);
        let out = forward(&m, &[1.0, -2.0, 3.0], true, 5).unwrap();
        assert_eq!(out.to_vec(), vec![0.0, 0.0]);
    }

    #[test]
    fn inference_is_repeatable() {
        let a = arch(&[3, 6, 5, 2], 0.5);
        let m = init_model(&a, 2).unwrap();
        let x = [0.3, -0.7, 0.9];
        let first = forward(&m, &x, false, 1).unwrap();
        for s in 0..5 {
            assert_eq!(forward(&m, &x, false, s).unwrap(), first);
        }
    }

    #[test]
    fn hand_traced_dead_unit() {
        let a = arch(&[2, 1, 1, 2], 0.0);
        let m = MlpModel::from_parameters(
            a,
            vec![array![[1.0], [1.0]], array![[2.0]], array![[5.0, -3.0]]],
            vec![array![0.0], array![0.0], array![0.25, -0.5]],
            Mode::Infer,
        )
        .unwrap();
        let out = forward(&m, &[1.0, -1.0], false, 0).unwrap();
        assert_eq!(out.to_vec(), vec![0.25, -0.5]);
    }

    #[test]
    fn loss_values() {
        let m = init_model(&arch(&[2, 2, 2, 2], 0.0), 0).unwrap();
        assert_eq!(
            loss(array![1.0, 2.0].view(), array![1.0, 2.0].view(), &m, 0.0).unwrap(),
            0.0
        );
        assert_eq!(
            loss(array![0.0, 0.0].view(), array![0.0, 2.0].view(), &m, 0.0).unwrap(),
            2.0
        );
        let with_l2 = loss(array![0.0, 0.0].view(), array![0.0, 2.0].view(), &m, 0.1).unwrap();
        assert!((with_l2 - (2.0 + 0.1 * m.weight_penalty())).abs() < 1e-15);
        assert!(loss(array![0.0].view(), array![0.0, 2.0].view(), &m, 0.0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let m = init_model(&arch(&[3, 2, 2, 2], 0.0), 0).unwrap();
        assert!(forward(&m, &[1.0, 2.0], false, 0).is_err());
    }

    #[test]
    fn dropout_mask_is_inverted() {
        let a = arch(&[1, 1, 1, 1], 0.5);
        let mut m = init_model(&a, 0).unwrap();
        m.weights_mut().iter_mut().for_each(|w| w.fill(1.0));
        let x = Array2::from_elem((10_000, 1), 1.0);
        let mut rng = seed::rng(4);
        let trace = m.trace(x.view(), Some(&mut rng));
        let first = &trace.activations[1];
        let mean = first.mean().unwrap();
        // Deterministic activation is 1; masked values are 0 or 2.
        let var = first.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (first.len() - 1) as f64;
        let se = (var / first.len() as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean}, se {se}");
        assert!(first.iter().all(|&v| v == 0.0 || v == 2.0));
    }
}
