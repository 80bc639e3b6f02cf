use rand::Rng;

use super::config::EpisodeConfig;
use super::policy::{lookahead_with, select_among, Policy};
use crate::belief::{BeliefVector, DirichletTable, EncodedState};
use crate::env::{reward, ActionSet, EpisodeState, TrackDataset};
use crate::error::{Error, Result};
use crate::net::{NetworkParams, Sample};

/// One decision: the image and posterior block it was taken on, the true
/// label, the action and its frozen TD target.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub state_block: Vec<f64>,
    pub observation: Vec<f64>,
    pub label: usize,
    pub action: usize,
    pub target_q: f64,
}

impl Transition {
    pub fn sample(&self) -> Sample<'_> {
        Sample {
            observation: &self.observation,
            state_block: &self.state_block,
            label: self.label,
            action: self.action,
            target_q: self.target_q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Train {
        epsilon: f64,
    },
    /// Greedy, ε = 0.
    Eval,
}

impl Mode {
    pub fn epsilon(self) -> f64 {
        match self {
            Mode::Train { epsilon } => epsilon,
            Mode::Eval => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    pub object: usize,
    pub track: usize,
    pub transitions: Vec<Transition>,
    /// Predicted label after 1, 2, …, T + 1 observed images.
    pub predictions: Vec<usize>,
    pub rewards: Vec<f64>,
    pub actions: Vec<usize>,
    /// Start pose followed by the pose after each move.
    pub poses: Vec<usize>,
    /// Single-image belief of the image each move reached.
    pub move_beliefs: Vec<BeliefVector>,
}

impl EpisodeOutcome {
    pub fn correct(&self) -> impl Iterator<Item = bool> + '_ {
        self.predictions.iter().map(move |p| *p == self.object)
    }
}

/// Frozen parameters and settings for running interaction sequences.
#[derive(Debug, Clone, Copy)]
pub struct Runner<'a> {
    pub params: &'a NetworkParams,
    pub table: &'a DirichletTable,
    pub actions: &'a ActionSet,
    pub config: EpisodeConfig,
}

impl<'a> Runner<'a> {
    pub fn new(
        params: &'a NetworkParams,
        table: &'a DirichletTable,
        actions: &'a ActionSet,
        config: EpisodeConfig,
    ) -> Result<Self> {
        let spec = params.spec();
        if actions.len() != spec.num_actions {
            return Err(Error::Dimension {
                what: "action set",
                expected: spec.num_actions,
                actual: actions.len(),
            });
        }
        if table.num_classes() != spec.num_classes || table.num_actions() != spec.num_actions {
            return Err(Error::Dimension {
                what: "Dirichlet table",
                expected: spec.num_classes * spec.num_actions,
                actual: table.num_classes() * table.num_actions(),
            });
        }
        Ok(Self {
            params,
            table,
            actions,
            config,
        })
    }

    fn check_dataset(&self, dataset: &TrackDataset) -> Result<()> {
        let spec = self.params.spec();
        if dataset.feature_dim() != spec.input_dim {
            return Err(Error::Dimension {
                what: "dataset features",
                expected: spec.input_dim,
                actual: dataset.feature_dim(),
            });
        }
        if dataset.num_classes() != spec.num_classes {
            return Err(Error::Dimension {
                what: "dataset classes",
                expected: spec.num_classes,
                actual: dataset.num_classes(),
            });
        }
        if dataset.num_bins() != self.actions.num_bins() {
            return Err(Error::Dimension {
                what: "pose bins",
                expected: self.actions.num_bins(),
                actual: dataset.num_bins(),
            });
        }
        Ok(())
    }

    /// Runs `moves_per_sequence` moves from `initial_pose` of track `track`.
    ///
    /// Each move classifies the current image, picks an action on the fused
    /// state, steps the gripper, fuses the reached image into a copy of the
    /// state and sets the target to `γ · max Q` of that copy, plus the
    /// reward of the reached image on the last move.
    pub fn run_episode<R: Rng + ?Sized>(
        &self,
        dataset: &TrackDataset,
        track: usize,
        initial_pose: usize,
        policy: Policy,
        mode: Mode,
        rng: &mut R,
    ) -> Result<EpisodeOutcome> {
        self.check_dataset(dataset)?;
        let cfg = &self.config;
        let spec = self.params.spec();
        let (mut env, first) = EpisodeState::reset(dataset, track, initial_pose)?;
        let label = env.object;
        let moves = cfg.moves_per_sequence;

        let mut observation = first;
        let (mut belief, mut features) = self.params.classify(observation)?;
        let mut state = EncodedState::new(cfg.encoder, spec.num_classes, spec.num_actions);
        state.fuse_initial(&belief, Some(self.table))?;

        let mut out = EpisodeOutcome {
            object: label,
            track,
            transitions: Vec::with_capacity(moves),
            predictions: vec![state.predicted_label()],
            rewards: Vec::with_capacity(moves),
            actions: Vec::with_capacity(moves),
            poses: vec![initial_pose],
            move_beliefs: Vec::with_capacity(moves),
        };
        let epsilon = match policy {
            Policy::Learned => mode.epsilon(),
            Policy::Random => 1.0,
        };

        for t in 1..=moves {
            let encoded = state.encode(&self.params.latest_block(&belief, &features));
            let q = self.params.q_values(&encoded)?;
            let next_poses: Vec<usize> = (0..self.actions.len())
                .map(|a| env.resolve(a, self.actions, dataset))
                .collect();
            let action = select_among(
                &q,
                &next_poses,
                &env.visited,
                epsilon,
                cfg.mask_repeats,
                rng,
            );
            let next_obs = env.step(action, self.actions, dataset);

            let (next_belief, next_features) = self.params.classify(next_obs)?;
            let mut next_state = state.clone();
            next_state.fuse(&next_belief, action, Some(self.table))?;
            let (future, _) = lookahead_with(
                self.params,
                &next_belief,
                &next_features,
                &next_state,
                cfg.gamma,
            )?;
            let r = reward(next_belief.as_slice(), label);
            let target_q = if t == moves || cfg.reward_every_step {
                future + r
            } else {
                future
            };
            if !target_q.is_finite() {
                return Err(Error::NonFinite(format!("TD target at move {t}")));
            }

            out.transitions.push(Transition {
                state_block: state.posterior_block(),
                observation: observation.to_vec(),
                label,
                action,
                target_q,
            });
            out.rewards.push(r);
            out.actions.push(action);
            out.poses.push(env.pose_bin);
            out.predictions.push(next_state.predicted_label());
            out.move_beliefs.push(next_belief.clone());

            observation = next_obs;
            belief = next_belief;
            features = next_features;
            state = next_state;
        }
        Ok(out)
    }
}
