//! Binary channel container.
//!
//! Little-endian layout:
//!
//! ```text
//! magic   6 bytes   "RISC1\0"
//! M       u32       elements
//! K       u32       subcarriers
//! S       u32       samples
//! payload S * 4 * M * K f64
//! ```
//!
//! Each sample stores `h_t` then `h_r`, each column-major (subcarrier outer,
//! element inner) with real and imaginary parts interleaved.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use super::model::ChannelRealization;
use super::trajectory::ChannelSequence;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"RISC1\0";
const HEADER_LEN: usize = 6 + 3 * 4;

/// Serializes a sequence into the container format.
pub fn encode_channels(sequence: &ChannelSequence) -> Vec<u8> {
    let (m, k) = sequence.shape();
    let s = sequence.len();
    let mut out = Vec::with_capacity(HEADER_LEN + s * 4 * m * k * 8);
    out.extend_from_slice(MAGIC);
    for v in [m, k, s] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for r in sequence.realizations() {
        for h in [r.h_t(), r.h_r()] {
            for col in h.columns() {
                for z in col.iter() {
                    out.extend_from_slice(&z.re.to_le_bytes());
                    out.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
    }
    out
}

fn read_u32(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

/// Parses the container format. Header problems, payload length mismatches and
/// non-finite values each produce a distinct error.
pub fn decode_channels(bytes: &[u8]) -> Result<ChannelSequence> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::MalformedHeader(format!(
            "file is {} bytes, header needs {HEADER_LEN}",
            bytes.len()
        )));
    }
    if &bytes[..6] != MAGIC {
        return Err(Error::MalformedHeader("bad magic bytes".into()));
    }
    let m = read_u32(bytes, 6) as usize;
    let k = read_u32(bytes, 10) as usize;
    let s = read_u32(bytes, 14) as usize;
    if m == 0 || k == 0 || s == 0 {
        return Err(Error::MalformedHeader(format!(
            "dimensions must be non-zero, got M={m} K={k} S={s}"
        )));
    }
    let floats_per_sample = 4 * m * k;
    let expected = s
        .checked_mul(floats_per_sample)
        .and_then(|n| n.checked_mul(8))
        .ok_or_else(|| Error::MalformedHeader("declared dimensions overflow".into()))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::TruncatedPayload {
            expected,
            found: payload.len(),
        });
    }

    let mut floats = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")));
    let mut realizations = Vec::with_capacity(s);
    for sample in 0..s {
        let mut read_matrix = |base: usize| -> Result<Array2<Complex64>> {
            let mut h = Array2::zeros((m, k));
            for kk in 0..k {
                for mm in 0..m {
                    let offset = base + 2 * (kk * m + mm);
                    let re = floats.next().expect("length checked");
                    let im = floats.next().expect("length checked");
                    if !re.is_finite() {
                        return Err(Error::NonFinite { sample, offset });
                    }
                    if !im.is_finite() {
                        return Err(Error::NonFinite {
                            sample,
                            offset: offset + 1,
                        });
                    }
                    h[(mm, kk)] = Complex64::new(re, im);
                }
            }
            Ok(h)
        };
        let h_t = read_matrix(0)?;
        let h_r = read_matrix(2 * m * k)?;
        realizations.push(ChannelRealization::new(h_t, h_r)?);
    }
    ChannelSequence::new(realizations, 0, None)
}

/// Writes a sequence to `path`.
pub fn export_channels(path: impl AsRef<Path>, sequence: &ChannelSequence) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_channels(sequence)).map_err(|e| Error::io(path, e))
}

/// Reads a sequence written by [`export_channels`] or an external tool.
pub fn ingest_channels(path: impl AsRef<Path>) -> Result<ChannelSequence> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_channels(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(m: u32, k: u32, s: u32) -> Vec<u8> {
        let mut b = MAGIC.to_vec();
        for v in [m, k, s] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b
    }

    #[test]
    fn wrong_payload_length_is_truncation() {
        let mut b = header(4, 2, 1);
        b.extend_from_slice(&[0u8; 8 * 10]);
        assert!(matches!(
            decode_channels(&b),
            Err(Error::TruncatedPayload {
                expected: 256,
                found: 80
            })
        ));
    }

    #[test]
    fn nan_payload_is_non_finite() {
        let mut b = header(1, 1, 1);
        for v in [1.0, 0.0, f64::NAN, 0.0] {
            b.extend_from_slice(&f64::to_le_bytes(v));
        }
        assert!(matches!(
            decode_channels(&b),
            Err(Error::NonFinite { sample: 0, offset: 2 })
        ));
    }

    #[test]
    fn bad_header_variants() {
        assert!(matches!(decode_channels(b"RISC1"), Err(Error::MalformedHeader(_))));
        let mut b = header(1, 1, 1);
        b[0] = b'X';
        assert!(matches!(decode_channels(&b), Err(Error::MalformedHeader(_))));
        assert!(matches!(
            decode_channels(&header(0, 1, 1)),
            Err(Error::MalformedHeader(_))
        ));
    }

    #[test]
    fn column_major_interleaved_layout() {
        let h_t = Array2::from_shape_fn((2, 2), |(m, k)| Complex64::new((10 * m + k) as f64, -1.0));
        let h_r = Array2::from_elem((2, 2), Complex64::new(0.5, 0.25));
        let seq = ChannelSequence::new(vec![ChannelRealization::new(h_t, h_r).unwrap()], 0, None).unwrap();
        let bytes = encode_channels(&seq);
        let f = |i: usize| f64::from_le_bytes(bytes[HEADER_LEN + 8 * i..HEADER_LEN + 8 * i + 8].try_into().unwrap());
        // (m=0,k=0), (m=1,k=0), (m=0,k=1) ...
        assert_eq!([f(0), f(1), f(2), f(4)], [0.0, -1.0, 10.0, 1.0]);
        assert_eq!(f(8), 0.5);
        assert_eq!(decode_channels(&bytes).unwrap(), seq);
    }
}
