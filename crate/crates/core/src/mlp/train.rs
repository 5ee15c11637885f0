use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;

use super::config::TrainConfig;
use super::network::{MlpModel, Mode};
use crate::dataset::TrainingSample;
use crate::error::{Error, Result};
use crate::seed::{self, SimRng};

/// Inputs and targets as dense matrices, one sample per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Examples {
    pub inputs: Array2<f64>,
    pub targets: Array2<f64>,
}

impl Examples {
    pub fn new(inputs: Array2<f64>, targets: Array2<f64>) -> Result<Self> {
        if inputs.nrows() != targets.nrows() {
            return Err(Error::shape("examples", inputs.nrows(), targets.nrows()));
        }
        Ok(Self { inputs, targets })
    }

    /// Flattens each sample's history row-major into one input row.
    pub fn from_samples(samples: &[TrainingSample]) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::InsufficientSamples {
                needed: 1,
                available: 0,
            });
        };
        let in_w = first.history.len();
        let out_w = first.target.len();
        let mut inputs = Array2::zeros((samples.len(), in_w));
        let mut targets = Array2::zeros((samples.len(), out_w));
        for (i, s) in samples.iter().enumerate() {
            if s.history.len() != in_w || s.target.len() != out_w {
                return Err(Error::shape(
                    "examples",
                    format!("{in_w}+{out_w}"),
                    format!("{}+{}", s.history.len(), s.target.len()),
                ));
            }
            inputs.row_mut(i).assign(&ndarray::aview1(s.input()));
            targets.row_mut(i).assign(&s.target);
        }
        Ok(Self { inputs, targets })
    }

    pub fn len(&self) -> usize {
        self.inputs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.nrows() == 0
    }
}

/// Per-epoch training history.
///
/// `train_loss` and `test_loss` are the mean squared errors of the network
/// in inference mode at the end of each epoch, without the weight penalty.
/// `minibatch_loss` is the running mean of the dropout-perturbed mini-batch
/// objectives (weight penalty included) seen during the epoch. `test_loss` is NaN when no test set is given.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainReport {
    pub learning_rate: Vec<f64>,
    pub train_loss: Vec<f64>,
    pub test_loss: Vec<f64>,
    pub minibatch_loss: Vec<f64>,
}

impl TrainReport {
    pub fn epochs(&self) -> usize {
        self.train_loss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.train_loss.is_empty()
    }
}

/// Inference-mode mean squared error over a whole set, evaluated in chunks.
pub fn evaluate_mse(model: &MlpModel, inputs: ArrayView2<f64>, targets: ArrayView2<f64>) -> Result<f64> {
    const CHUNK: usize = 256;
    let mut total = 0.0;
    for (x, y) in inputs
        .axis_chunks_iter(Axis(0), CHUNK)
        .zip(targets.axis_chunks_iter(Axis(0), CHUNK))
    {
        let pred = model.predict_batch(x)?;
        total += (&pred - &y).iter().map(|v| v * v).sum::<f64>();
    }
    Ok(total / targets.len() as f64)
}

/// Momentum SGD: `v ← μ v − η g`, `θ ← θ + v`, with `g` including the L2
/// term `l2 * w` on weights.
#[derive(Debug, Clone)]
pub struct SgdMomentum {
    momentum: f64,
    velocity: Vec<(Array2<f64>, Array1<f64>)>,
}

impl SgdMomentum {
    pub fn new(model: &MlpModel, momentum: f64) -> Self {
        let velocity = model
            .weights()
            .iter()
            .zip(model.biases())
            .map(|(w, b)| (Array2::zeros(w.dim()), Array1::zeros(b.len())))
            .collect();
        Self { momentum, velocity }
    }

    /// One update on a mini-batch. Returns the batch objective (MSE plus
    /// weight penalty) evaluated before the update.
    pub fn step(
        &mut self,
        model: &mut MlpModel,
        inputs: ArrayView2<f64>,
        targets: ArrayView2<f64>,
        learning_rate: f64,
        l2: f64,
        dropout: Option<&mut SimRng>,
    ) -> Result<f64> {
        let (loss, grads) = model.loss_and_gradients(inputs, targets, l2, dropout)?;
        let mu = self.momentum;
        for (l, (vw, vb)) in self.velocity.iter_mut().enumerate() {
            vw.zip_mut_with(&grads.weights[l], |v, g| *v = mu * *v - learning_rate * g);
            vb.zip_mut_with(&grads.biases[l], |v, g| *v = mu * *v - learning_rate * g);
            model.weights_mut()[l].zip_mut_with(vw, |w, v| *w += v);
            model.biases_mut()[l].zip_mut_with(vb, |b, v| *b += v);
        }
        Ok(loss)
    }
}

/// Trains `model` with mini-batch momentum SGD and returns it in inference mode.
///
/// Batches are reshuffled every epoch from a generator seeded by
/// `config.seed`; dropout masks come from a separate generator with the same
/// origin. A non-finite mini-batch loss aborts with [`Error::Divergence`].
pub fn train(
    mut model: MlpModel,
    train_set: &Examples,
    test_set: Option<&Examples>,
    config: &TrainConfig,
) -> Result<(MlpModel, TrainReport)> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(Error::InsufficientSamples {
            needed: 1,
            available: 0,
        });
    }
    let arch = model.architecture().clone();
    for set in std::iter::once(train_set).chain(test_set) {
        if set.inputs.ncols() != arch.input_width() || set.targets.ncols() != arch.output_width() {
            return Err(Error::shape(
                "training data",
                format!("{}->{}", arch.input_width(), arch.output_width()),
                format!("{}->{}", set.inputs.ncols(), set.targets.ncols()),
            ));
        }
    }

    model.mode = Mode::Train;
    let mut shuffle_rng = seed::rng(seed::derive(config.seed, "shuffle"));
    let mut dropout_rng = seed::rng(seed::derive(config.seed, "dropout"));
    let mut optimizer = SgdMomentum::new(&model, config.momentum);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut report = TrainReport::default();

    for epoch in 0..config.max_epochs {
        let lr = config.learning_rate(epoch);
        order.shuffle(&mut shuffle_rng);
        let mut running = 0.0;
        for batch in order.chunks(config.batch_size) {
            let x = train_set.inputs.select(Axis(0), batch);
            let y = train_set.targets.select(Axis(0), batch);
            let batch_loss = optimizer.step(
                &mut model,
                x.view(),
                y.view(),
                lr,
                config.l2_coefficient,
                Some(&mut dropout_rng),
            )?;
            if !batch_loss.is_finite() {
                return Err(Error::Divergence { epoch });
            }
            running += batch_loss * batch.len() as f64;
        }
        let train_loss = evaluate_mse(&model, train_set.inputs.view(), train_set.targets.view())?;
        let test_loss = match test_set {
            Some(t) if !t.is_empty() => evaluate_mse(&model, t.inputs.view(), t.targets.view())?,
            _ => f64::NAN,
        };
        if !train_loss.is_finite() || !model.is_finite() {
            return Err(Error::Divergence { epoch });
        }
        report.learning_rate.push(lr);
        report.train_loss.push(train_loss);
        report.test_loss.push(test_loss);
        report.minibatch_loss.push(running / train_set.len() as f64);
    }
    model.mode = Mode::Infer;
    Ok((model, report))
}
