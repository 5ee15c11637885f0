use crate::channel::ChannelSequence;
use crate::error::{Error, Result};
use crate::ris::{cascade, exhaustive_search, Codebook, LinkBudget};

/// Mean lagged correlation of oracle rate vectors along a sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalCorrelation {
    /// Average over blocks `s >= lag` of Pearson(r(s), r(s - lag)).
    pub value: f64,
    /// Set when some pair had a constant rate vector; such pairs count as 1.
    pub degenerate: bool,
    pub pairs: usize,
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va <= 0.0 || vb <= 0.0 {
        return None;
    }
    Some((cov / (va.sqrt() * vb.sqrt())).clamp(-1.0, 1.0))
}

/// How similar the per-beam oracle rates are `lag` blocks apart.
pub fn measure_temporal_correlation(
    sequence: &ChannelSequence,
    codebook: &Codebook,
    budget: &LinkBudget,
    lag: usize,
) -> Result<TemporalCorrelation> {
    if lag == 0 {
        return Err(Error::InvalidConfig("lag must be >= 1".into()));
    }
    if lag >= sequence.len() {
        return Err(Error::InsufficientSamples {
            needed: lag + 1,
            available: sequence.len(),
        });
    }
    let rates = sequence
        .realizations()
        .iter()
        .map(|r| exhaustive_search(&cascade(r)?, codebook, budget).map(|v| v.rates))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    let mut degenerate = false;
    for s in lag..rates.len() {
        match pearson(&rates[s], &rates[s - lag]) {
            Some(c) => total += c,
            None => {
                degenerate = true;
                total += 1.0;
            }
        }
    }
    let pairs = rates.len() - lag;
    Ok(TemporalCorrelation {
        value: total / pairs as f64,
        degenerate,
        pairs,
    })
}
