//! Model checkpoint format (little-endian):
//!
//! ```text
//! magic    6 bytes  "RISMLP"
//! version  u32      currently 1
//! mode     u8       0 = train, 1 = infer
//! dropout  f64
//! n        u32      number of layer widths
//! widths   n x u32
//! params   per layer: weights (in x out, row-major) then biases, as f64
//! ```

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::config::MlpArchitecture;
use super::network::{MlpModel, Mode};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 6] = b"RISMLP";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn encode_model(model: &MlpModel) -> Vec<u8> {
    let arch = model.architecture();
    let mut out = Vec::with_capacity(64 + 8 * model.num_parameters());
    out.extend_from_slice(CHECKPOINT_MAGIC);
    out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    out.push(match model.mode {
        Mode::Train => 0,
        Mode::Infer => 1,
    });
    out.extend_from_slice(&arch.dropout_rate.to_le_bytes());
    out.extend_from_slice(&(arch.layer_widths.len() as u32).to_le_bytes());
    for &w in &arch.layer_widths {
        out.extend_from_slice(&(w as u32).to_le_bytes());
    }
    for (w, b) in model.weights().iter().zip(model.biases()) {
        for v in w.iter().chain(b.iter()) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::MalformedCheckpoint(format!("unexpected end of data at byte {}", self.at)))?;
        let s = &self.bytes[self.at..end];
        self.at = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_model(bytes: &[u8]) -> Result<MlpModel> {
    let mut r = Reader { bytes, at: 0 };
    if r.take(6)? != CHECKPOINT_MAGIC {
        return Err(Error::MalformedCheckpoint("bad magic bytes".into()));
    }
    let version = r.u32()?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::MalformedCheckpoint(format!("unsupported version {version}")));
    }
    let mode = match r.take(1)?[0] {
        0 => Mode::Train,
        1 => Mode::Infer,
        other => return Err(Error::MalformedCheckpoint(format!("unknown mode byte {other}"))),
    };
    let dropout = r.f64()?;
    let n = r.u32()? as usize;
    if n > 1 << 16 {
        return Err(Error::MalformedCheckpoint(format!("implausible layer count {n}")));
    }
    let widths = (0..n)
        .map(|_| r.u32().map(|w| w as usize))
        .collect::<Result<Vec<_>>>()?;
    let arch = MlpArchitecture::new(widths, dropout).map_err(|e| Error::MalformedCheckpoint(e.to_string()))?;
    let mut weights = Vec::new();
    let mut biases = Vec::new();
    for pair in arch.layer_widths.windows(2) {
        let w = (0..pair[0] * pair[1]).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        let b = (0..pair[1]).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
        weights.push(Array2::from_shape_vec((pair[0], pair[1]), w).expect("sized"));
        biases.push(Array1::from(b));
    }
    if r.at != bytes.len() {
        return Err(Error::MalformedCheckpoint(format!(
            "{} trailing bytes",
            bytes.len() - r.at
        )));
    }
    MlpModel::from_parameters(arch, weights, biases, mode).map_err(|e| Error::MalformedCheckpoint(e.to_string()))
}

pub fn save_model(path: impl AsRef<Path>, model: &MlpModel) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<MlpModel> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_model(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::init_model;

    #[test]
    fn round_trip_is_bit_exact() {
        let arch = MlpArchitecture::new(vec![7, 5, 3, 4], 0.25).unwrap();
        let mut model = init_model(&arch, 3).unwrap();
        model.biases_mut()[1][2] = -1.0e-300;
        let back = decode_model(&encode_model(&model)).unwrap();
        assert_eq!(back, model);
        for (a, b) in back.weights().iter().zip(model.weights()) {
            assert!(a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }

    #[test]
    fn corrupt_checkpoints_rejected() {
        let arch = MlpArchitecture::new(vec![2, 2, 2, 2], 0.0).unwrap();
        let bytes = encode_model(&init_model(&arch, 0).unwrap());
        assert!(decode_model(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(decode_model(&extra).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_model(&bad).is_err());
        let mut version = bytes;
        version[6] = 9;
        assert!(matches!(decode_model(&version), Err(Error::MalformedCheckpoint(_))));
    }
}
