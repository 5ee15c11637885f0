//! RIS beam selection from history-windowed sampled channels.
//!
//! The crate covers the whole loop of a reconfigurable-intelligent-surface
//! link that learns which codebook beam to use:
//!
//! - [`channel`] synthesizes wideband geometric channels for the
//!   transmitter-to-RIS and RIS-to-receiver links, drives them along slowly
//!   drifting trajectories, and reads/writes a binary channel container.
//! - [`ris`] builds DFT beam codebooks, evaluates received signals and
//!   achievable rates, runs the exhaustive-search oracle, and samples the
//!   channel at a few active elements.
//! - [`dataset`] turns sampled channels and oracle rate vectors into
//!   history-windowed regression samples.
//! - [`mlp`] is a dense ReLU network trained with momentum SGD, plus the
//!   run-time beam predictor.
//! - [`harness`] wires everything into reproducible experiments, sweeps and
//!   CSV reports.

pub mod channel;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod mlp;
pub mod ris;
pub mod seed;

pub use error::{Error, Result};
