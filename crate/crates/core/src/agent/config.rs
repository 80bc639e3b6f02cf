use serde::{Deserialize, Serialize};

use crate::belief::EncoderKind;
use crate::env::Boundary;
use crate::error::{Error, Result};

/// Training hyper-parameters. Iterations are counted from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub num_iterations: usize,
    pub moves_per_sequence: usize,
    /// Interaction sequences run per iteration.
    pub episodes_per_iteration: usize,
    pub minibatch_size: usize,
    pub lr_initial: f64,
    pub lr_decay_points: Vec<usize>,
    pub lr_decay_factor: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    /// Share of the run over which ε falls linearly to `epsilon_end`.
    pub epsilon_decay_fraction: f64,
    pub gamma: f64,
    pub encoder: EncoderKind,
    pub mask_repeats: bool,
    pub dirichlet_lr: f64,
    /// Add the reward to every move's target instead of the last one only.
    pub reward_every_step: bool,
    pub boundary: Boundary,
    /// Start poses cycled through by iteration; random bins when empty.
    pub initial_poses: Vec<usize>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            num_iterations: 4000,
            moves_per_sequence: 5,
            episodes_per_iteration: 1,
            minibatch_size: 128,
            lr_initial: 0.1,
            lr_decay_points: vec![400, 800, 1200, 1500],
            lr_decay_factor: 0.5,
            epsilon_start: 0.9,
            epsilon_end: 0.1,
            epsilon_decay_fraction: 0.75,
            gamma: 0.9,
            encoder: EncoderKind::Dirichlet,
            mask_repeats: true,
            dirichlet_lr: 0.01,
            reward_every_step: false,
            boundary: Boundary::Clamp,
            initial_poses: Vec::new(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if self.moves_per_sequence == 0
            || self.minibatch_size == 0
            || self.episodes_per_iteration == 0
        {
            return bad(
                "moves_per_sequence, episodes_per_iteration and minibatch_size must be positive"
                    .into(),
            );
        }
        if !(self.lr_initial > 0.0 && self.lr_initial.is_finite()) {
            return bad(format!(
                "lr_initial must be positive, got {}",
                self.lr_initial
            ));
        }
        if !(self.lr_decay_factor > 0.0 && self.lr_decay_factor.is_finite()) {
            return bad(format!(
                "lr_decay_factor must be positive, got {}",
                self.lr_decay_factor
            ));
        }
        for (name, e) in [
            ("epsilon_start", self.epsilon_start),
            ("epsilon_end", self.epsilon_end),
        ] {
            if !(0.0..=1.0).contains(&e) {
                return bad(format!("{name} must lie in [0, 1], got {e}"));
            }
        }
        if self.epsilon_end > self.epsilon_start {
            return bad("epsilon_end above epsilon_start would let epsilon increase".into());
        }
        if !(0.0..=1.0).contains(&self.epsilon_decay_fraction) {
            return bad(format!(
                "epsilon_decay_fraction must lie in [0, 1], got {}",
                self.epsilon_decay_fraction
            ));
        }
        if !(self.dirichlet_lr >= 0.0 && self.dirichlet_lr.is_finite()) {
            return bad(format!(
                "dirichlet_lr must be non-negative, got {}",
                self.dirichlet_lr
            ));
        }
        Ok(())
    }

    /// `lr_initial · factor^k`, `k` = decay points strictly before `iteration`.
    pub fn lr_at(&self, iteration: usize) -> f64 {
        let k = self
            .lr_decay_points
            .iter()
            .filter(|p| **p < iteration)
            .count();
        self.lr_initial * self.lr_decay_factor.powi(k as i32)
    }

    /// Linear decay from `epsilon_start` at iteration 1 to `epsilon_end`
    /// at the end of the decay window, constant afterwards.
    pub fn epsilon_at(&self, iteration: usize) -> f64 {
        let window = (self.epsilon_decay_fraction * self.num_iterations as f64).ceil() as usize;
        if window <= 1 {
            return if iteration <= 1 && window == 1 {
                self.epsilon_start
            } else {
                self.epsilon_end
            };
        }
        if iteration >= window {
            return self.epsilon_end;
        }
        let progress = iteration.saturating_sub(1) as f64 / (window - 1) as f64;
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * progress
    }

    pub fn episode(&self) -> EpisodeConfig {
        EpisodeConfig {
            encoder: self.encoder,
            mask_repeats: self.mask_repeats,
            moves_per_sequence: self.moves_per_sequence,
            gamma: self.gamma,
            reward_every_step: self.reward_every_step,
            boundary: self.boundary,
        }
    }
}

/// The subset of [`TrainConfig`] an interaction sequence needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeConfig {
    pub encoder: EncoderKind,
    pub mask_repeats: bool,
    pub moves_per_sequence: usize,
    pub gamma: f64,
    pub reward_every_step: bool,
    pub boundary: Boundary,
}

impl Default for EpisodeConfig {
    fn default() -> Self {
        TrainConfig::default().episode()
    }
}
