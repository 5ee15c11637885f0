//! From-scratch multilayer perceptron regressor and beam predictor.
//!
//! The network maps a flattened history window of encoded sampled channels
//! to a predicted rate per codebook entry. ReLU hidden layers are each
//! followed by inverted dropout in training; the output layer is affine.
//! Training minimizes mean squared error plus an L2 weight penalty with
//! momentum SGD and a step learning-rate schedule.

mod checkpoint;
mod config;
mod network;
mod predict;
mod train;

pub use checkpoint::{decode_model, encode_model, load_model, save_model, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use config::{MlpArchitecture, TrainConfig};
pub use network::{forward, init_model, loss, Gradients, MlpModel, Mode};
pub use predict::predict_beam;
pub use train::{evaluate_mse, train, Examples, SgdMomentum, TrainReport};
