//! Simulated rotating gripper: pose bins, relative rotations, observation
//! tracks and the correct-label reward.

mod actions;
mod dataset;
mod episode;
mod synthetic;

pub use actions::{ActionSet, Boundary, ROTATION_MAGNITUDES};
pub use dataset::{load_tracks, Split, Track, TrackDataset};
pub use episode::{reward, EpisodeState};
pub use synthetic::{
    gen_synthetic, paired_ambiguity, AmbiguityGroup, SyntheticConfig, SyntheticWorld,
};
