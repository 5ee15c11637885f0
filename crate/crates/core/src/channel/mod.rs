//! Channel synthesis, trajectories, and the channel file container.

mod geometry;
mod io;
mod model;
mod trajectory;

pub use geometry::{array_response, ArrayGeometry};
pub use io::{decode_channels, encode_channels, export_channels, ingest_channels, MAGIC};
pub use model::{generate_channel, ChannelRealization, Pulse, RayPath, ScenarioConfig};
pub use trajectory::{sample_trajectory, ChannelSequence};
