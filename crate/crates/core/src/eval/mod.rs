//! Accuracy-vs-observations tables, policy comparisons and action
//! transition statistics.

mod accuracy;
mod compare;
mod transitions;

pub use accuracy::{
    episode_starts, evaluate, grid, play_all, AccuracyRow, AccuracyTable, RunSpec, StepCounts,
    Variant,
};
pub use compare::{
    compare, compare_models, train_variants, ComparisonReport, PairDelta, SeedModels,
};
pub use transitions::{transition_stats, TransitionStats};
