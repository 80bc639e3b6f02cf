//! Q-learning agent: ε-greedy selection with optional non-repeat masking,
//! look-ahead targets and the joint training loop.

mod config;
mod episode;
mod policy;
mod train;

pub use config::{EpisodeConfig, TrainConfig};
pub use episode::{EpisodeOutcome, Mode, Runner, Transition};
pub use policy::{admissible, discounted_max, lookahead, select_action, select_among, Policy};
pub use train::{train, train_with, LogRecord, Model, TrainAbort, TrainOutput};
