use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::belief::{BeliefVector, EncodedState};
use crate::env::ActionSet;
use crate::error::Result;
use crate::net::NetworkParams;

/// How actions are chosen at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// ε-greedy on the action branch (greedy when ε = 0).
    #[default]
    Learned,
    /// Uniform over admissible actions.
    Random,
}

impl Policy {
    pub fn short_name(self) -> &'static str {
        match self {
            Policy::Learned => "DAOR",
            Policy::Random => "Rnd",
        }
    }
}

/// Actions whose resulting pose is fresh, or every action when masking is off
/// or nothing is fresh.
pub fn admissible(
    next_poses: &[usize],
    visited: &BTreeSet<usize>,
    mask_repeats: bool,
) -> Vec<usize> {
    if mask_repeats {
        let fresh: Vec<usize> = (0..next_poses.len())
            .filter(|a| !visited.contains(&next_poses[*a]))
            .collect();
        if !fresh.is_empty() {
            return fresh;
        }
    }
    (0..next_poses.len()).collect()
}

/// ε-greedy choice given the pose each action leads to. Greedy picks the
/// admissible action with the highest Q, ties to the lowest index.
pub fn select_among<R: Rng + ?Sized>(
    qvalues: &[f64],
    next_poses: &[usize],
    visited: &BTreeSet<usize>,
    epsilon: f64,
    mask_repeats: bool,
    rng: &mut R,
) -> usize {
    let candidates = admissible(next_poses, visited, mask_repeats);
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        return candidates[rng.random_range(0..candidates.len())];
    }
    let mut best = candidates[0];
    for &a in &candidates[1..] {
        if qvalues[a] > qvalues[best] {
            best = a;
        }
    }
    best
}

/// ε-greedy action selection with optional non-repeat masking, using the
/// action set's boundary rule to find each action's pose.
pub fn select_action<R: Rng + ?Sized>(
    qvalues: &[f64],
    visited: &BTreeSet<usize>,
    current_pose: usize,
    actions: &ActionSet,
    epsilon: f64,
    mask_repeats: bool,
    rng: &mut R,
) -> usize {
    let next: Vec<usize> = (0..actions.len())
        .map(|a| actions.target_bin(current_pose, a))
        .collect();
    select_among(qvalues, &next, visited, epsilon, mask_repeats, rng)
}

/// `γ · max_a q[a]`.
pub fn discounted_max(qvalues: &[f64], gamma: f64) -> f64 {
    gamma * qvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Frozen TD target contribution of the next state: classifies the next
/// image for the latest block and returns `γ · max_a Q(next_state, a)`.
pub fn lookahead(
    params: &NetworkParams,
    next_observation: &[f64],
    next_state: &EncodedState,
    gamma: f64,
) -> Result<f64> {
    let (belief, features) = params.classify(next_observation)?;
    lookahead_with(params, &belief, &features, next_state, gamma).map(|(v, _)| v)
}

pub(crate) fn lookahead_with(
    params: &NetworkParams,
    belief: &BeliefVector,
    features: &[f64],
    next_state: &EncodedState,
    gamma: f64,
) -> Result<(f64, Vec<f64>)> {
    let q = params.q_values(&next_state.encode(&params.latest_block(belief, features)))?;
    Ok((discounted_max(&q, gamma), q))
}
