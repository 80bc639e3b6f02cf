use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::episode::{Mode, Runner, Transition};
use super::policy::Policy;
use crate::belief::{DirichletTable, EncoderKind};
use crate::env::{ActionSet, TrackDataset};
use crate::error::{Error, Result};
use crate::net::{NetworkParams, NetworkSpec, Sample};

/// One line of the training log.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub iteration: usize,
    /// Mean cross-entropy over this iteration's transitions.
    pub c_cl: f64,
    /// Mean squared TD error over this iteration's transitions.
    pub c_rl: f64,
    /// Mean `−log Dir(b; α)` of the beliefs reached this iteration, taken
    /// under the (true object, action) cell before it is refitted.
    pub dirichlet_nll: f64,
    pub epsilon: f64,
    pub lr: f64,
}

/// Network and Dirichlet table trained together.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub params: NetworkParams,
    pub table: DirichletTable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutput {
    pub model: Model,
    pub log: Vec<LogRecord>,
}

/// Training stopped early; carries the log written so far.
#[derive(Debug, thiserror::Error)]
#[error("training aborted at iteration {iteration}: {source}")]
pub struct TrainAbort {
    pub iteration: usize,
    pub log: Vec<LogRecord>,
    #[source]
    pub source: Error,
}

/// Runs the joint training loop. See [`train_with`].
pub fn train(
    dataset: &TrackDataset,
    spec: &NetworkSpec,
    config: &TrainConfig,
) -> std::result::Result<TrainOutput, TrainAbort> {
    train_with(dataset, spec, config, |_| {})
}

/// Runs `num_iterations` iterations, each playing `episodes_per_iteration`
/// interaction sequences from random tracks and start poses.
///
/// Transitions pool in a FIFO buffer and every full minibatch triggers one
/// SGD step at the iteration's learning rate. With the Dirichlet encoder
/// every move also takes one `fit_step` on the (true object, action) cell
/// with the belief of the image the move reached.
pub fn train_with(
    dataset: &TrackDataset,
    spec: &NetworkSpec,
    config: &TrainConfig,
    mut on_record: impl FnMut(&LogRecord),
) -> std::result::Result<TrainOutput, TrainAbort> {
    let abort = |iteration, log, source| TrainAbort {
        iteration,
        log,
        source,
    };
    let setup = || -> Result<(NetworkParams, DirichletTable, ActionSet)> {
        config.validate()?;
        if dataset.is_empty() {
            return Err(Error::Empty("training dataset"));
        }
        let params = NetworkParams::init(spec.clone(), config.seed)?;
        let table = DirichletTable::uniform(spec.num_classes, spec.num_actions)?;
        let actions = ActionSet::rotations(dataset.num_bins(), config.boundary)?;
        Ok((params, table, actions))
    };
    let (mut params, mut table, actions) = setup().map_err(|e| abort(0, Vec::new(), e))?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let mut buffer: VecDeque<Transition> = VecDeque::new();
    let mut log = Vec::with_capacity(config.num_iterations);
    let episode_cfg = config.episode();
    let fit_table = config.encoder == EncoderKind::Dirichlet;

    for iteration in 1..=config.num_iterations {
        let epsilon = config.epsilon_at(iteration);
        let lr = config.lr_at(iteration);
        let step = |params: &NetworkParams,
                    table: &mut DirichletTable,
                    buffer: &mut VecDeque<Transition>,
                    rng: &mut ChaCha8Rng|
         -> Result<(f64, f64, f64)> {
            let mut fresh = Vec::new();
            let mut nll = 0.0;
            let mut fits = 0usize;
            for _ in 0..config.episodes_per_iteration {
                let track = rng.random_range(0..dataset.tracks().len());
                let pose = pick_pose(dataset, track, config, iteration, rng);
                let runner = Runner::new(params, table, &actions, episode_cfg)?;
                let out = runner.run_episode(
                    dataset,
                    track,
                    pose,
                    Policy::Learned,
                    Mode::Train { epsilon },
                    rng,
                )?;
                for (action, belief) in out.actions.iter().zip(&out.move_beliefs) {
                    nll -= table.log_density(out.object, *action, belief)?;
                    fits += 1;
                    if fit_table {
                        table.fit_step(
                            out.object,
                            *action,
                            std::slice::from_ref(belief),
                            config.dirichlet_lr,
                        )?;
                    }
                }
                fresh.extend(out.transitions);
            }
            let samples: Vec<Sample<'_>> = fresh.iter().map(Transition::sample).collect();
            let costs = params.costs(&samples)?;
            let nll = nll / fits as f64;
            if !costs.total().is_finite() || !nll.is_finite() {
                return Err(Error::NonFinite(format!(
                    "costs c_cl={} c_rl={} nll={nll}",
                    costs.classification, costs.td
                )));
            }
            buffer.extend(fresh);
            Ok((costs.classification, costs.td, nll))
        };
        let (c_cl, c_rl, dirichlet_nll) = match step(&params, &mut table, &mut buffer, &mut rng) {
            Ok(v) => v,
            Err(e) => return Err(abort(iteration, log, e)),
        };

        while buffer.len() >= config.minibatch_size {
            let batch: Vec<Transition> = buffer.drain(..config.minibatch_size).collect();
            let samples: Vec<Sample<'_>> = batch.iter().map(Transition::sample).collect();
            if let Err(e) = params.train_step(&samples, lr, &mut rng) {
                return Err(abort(iteration, log, e));
            }
        }

        let record = LogRecord {
            iteration,
            c_cl,
            c_rl,
            dirichlet_nll,
            epsilon,
            lr,
        };
        on_record(&record);
        log.push(record);
    }
    Ok(TrainOutput {
        model: Model { params, table },
        log,
    })
}

fn pick_pose<R: Rng + ?Sized>(
    dataset: &TrackDataset,
    track: usize,
    config: &TrainConfig,
    iteration: usize,
    rng: &mut R,
) -> usize {
    let t = dataset.track(track);
    if config.initial_poses.is_empty() {
        let n = t.poses.len();
        t.bins()
            .nth(rng.random_range(0..n))
            .expect("index below pose count")
    } else {
        let wanted = config.initial_poses[(iteration - 1) % config.initial_poses.len()];
        t.nearest_bin(wanted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{gen_synthetic, SyntheticConfig};

    fn tiny() -> (TrackDataset, NetworkSpec, TrainConfig) {
        let data = SyntheticConfig {
            num_classes: 3,
            num_bins: 16,
            feature_dim: 4,
            tracks_per_object: 2,
            ambiguity: vec![],
            noise_sigma: 0.2,
            ..SyntheticConfig::default()
        };
        let ds = gen_synthetic(&data, 2).unwrap();
        let spec = NetworkSpec {
            input_dim: 4,
            hidden_dims: vec![8],
            feature_dim: 6,
            num_classes: 3,
            num_actions: 10,
            q_hidden_dims: vec![8],
            latest_block: Default::default(),
            dropout: 0.0,
        };
        let cfg = TrainConfig {
            num_iterations: 60,
            minibatch_size: 16,
            seed: 9,
            ..TrainConfig::default()
        };
        (ds, spec, cfg)
    }

    #[test]
    fn zero_iterations_returns_initial_model() {
        let (ds, spec, mut cfg) = tiny();
        cfg.num_iterations = 0;
        let out = train(&ds, &spec, &cfg).unwrap();
        assert!(out.log.is_empty());
        assert_eq!(
            out.model.params,
            NetworkParams::init(spec.clone(), cfg.seed).unwrap()
        );
        assert_eq!(out.model.table, DirichletTable::uniform(3, 10).unwrap());
    }

    #[test]
    fn log_has_one_record_per_iteration_and_is_reproducible() {
        let (ds, spec, cfg) = tiny();
        let a = train(&ds, &spec, &cfg).unwrap();
        let b = train(&ds, &spec, &cfg).unwrap();
        assert_eq!(a.log.len(), 60);
        assert_eq!(a, b);
        assert!(a.log.windows(2).all(|w| w[1].epsilon <= w[0].epsilon));
        assert_ne!(a.model.params, NetworkParams::init(spec, cfg.seed).unwrap());
    }

    #[test]
    fn naive_bayes_leaves_table_alone() {
        let (ds, spec, mut cfg) = tiny();
        cfg.encoder = EncoderKind::NaiveBayes;
        cfg.mask_repeats = false;
        let out = train(&ds, &spec, &cfg).unwrap();
        assert_eq!(out.model.table, DirichletTable::uniform(3, 10).unwrap());
    }

    #[test]
    fn bad_config_aborts_with_empty_log() {
        let (ds, spec, mut cfg) = tiny();
        cfg.gamma = 0.0;
        let err = train(&ds, &spec, &cfg).unwrap_err();
        assert_eq!(err.iteration, 0);
        assert!(err.log.is_empty());
    }

    #[test]
    fn diverging_run_aborts_with_partial_log() {
        let (ds, spec, mut cfg) = tiny();
        cfg.lr_initial = 1e12;
        cfg.lr_decay_points.clear();
        let err = train(&ds, &spec, &cfg).unwrap_err();
        assert!(err.iteration >= 1);
        assert_eq!(err.log.len(), err.iteration - 1);
    }
}
