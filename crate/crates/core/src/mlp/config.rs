use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Layer widths `[input, hidden.., output]` plus the dropout rate applied
/// after every hidden ReLU during training. The output layer is affine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpArchitecture {
    pub layer_widths: Vec<usize>,
    pub dropout_rate: f64,
}

impl MlpArchitecture {
    pub fn new(layer_widths: Vec<usize>, dropout_rate: f64) -> Result<Self> {
        let arch = Self {
            layer_widths,
            dropout_rate,
        };
        arch.validate()?;
        Ok(arch)
    }

    /// Full-size network: input `t_s * 1024`, hidden 1024/4096/8192, output 1024.
    pub fn full_scale(t_s: usize) -> Self {
        Self {
            layer_widths: vec![t_s * 1024, 1024, 4096, 8192, 1024],
            dropout_rate: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layer_widths.len() < 4 {
            return Err(Error::InvalidConfig(format!(
                "need at least two hidden layers, got widths {:?}",
                self.layer_widths
            )));
        }
        if self.layer_widths.contains(&0) {
            return Err(Error::InvalidConfig("layer widths must be >= 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::InvalidConfig(format!(
                "dropout rate must lie in [0, 1), got {}",
                self.dropout_rate
            )));
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.layer_widths[0]
    }

    pub fn output_width(&self) -> usize {
        *self.layer_widths.last().expect("validated widths")
    }

    pub fn num_layers(&self) -> usize {
        self.layer_widths.len() - 1
    }
}

/// Mini-batch SGD with momentum and a step learning-rate schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_epochs: usize,
    pub batch_size: usize,
    pub l2_coefficient: f64,
    pub initial_lr: f64,
    /// Epochs between learning-rate drops.
    pub lr_drop_period_epochs: usize,
    pub lr_drop_factor: f64,
    pub momentum: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    /// 49 epochs, batch 500, L2 1e-4, learning rate 0.1 halved every 8 epochs,
    /// momentum 0.9.
    fn default() -> Self {
        Self {
            max_epochs: 49,
            batch_size: 500,
            l2_coefficient: 1e-4,
            initial_lr: 0.1,
            lr_drop_period_epochs: 8,
            lr_drop_factor: 0.5,
            momentum: 0.9,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.max_epochs == 0 || self.batch_size == 0 || self.lr_drop_period_epochs == 0 {
            return bad("max_epochs, batch_size and lr_drop_period_epochs must be >= 1".into());
        }
        if !(self.l2_coefficient >= 0.0 && self.l2_coefficient.is_finite()) {
            return bad(format!("l2_coefficient must be >= 0, got {}", self.l2_coefficient));
        }
        if !(self.initial_lr >= 0.0 && self.initial_lr.is_finite()) {
            return bad(format!("initial_lr must be >= 0, got {}", self.initial_lr));
        }
        if !(self.lr_drop_factor > 0.0 && self.lr_drop_factor <= 1.0) {
            return bad(format!(
                "lr_drop_factor must lie in (0, 1], got {}",
                self.lr_drop_factor
            ));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad(format!("momentum must lie in [0, 1), got {}", self.momentum));
        }
        Ok(())
    }

    /// `initial_lr * lr_drop_factor ^ floor(epoch / lr_drop_period_epochs)`.
    pub fn learning_rate(&self, epoch: usize) -> f64 {
        let drops = (epoch / self.lr_drop_period_epochs) as i32;
        self.initial_lr * self.lr_drop_factor.powi(drops)
    }
}
