//! Codebooks, received signal and rate evaluation, the exhaustive-search
//! oracle, and active-element sampling.
//!
//! Exhaustive search costs `O(|P| M K)` per coherence block and is run once
//! per collected training sample.

mod codebook;
mod link;
mod sampling;
mod search;

pub use codebook::{build_dft_codebook, Codebook};
pub use link::{achievable_rate, cascade, received_signal, LinkBudget, UNIT_MODULUS_TOL};
pub use sampling::{
    estimate_sampled_channel, sampled_channel, select_active_elements, SampledChannel, SelectionMatrix,
};
pub use search::{exhaustive_search, first_argmax, RateVector};
