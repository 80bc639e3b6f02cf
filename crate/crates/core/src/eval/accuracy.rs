use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{EpisodeConfig, EpisodeOutcome, Mode, Model, Policy, Runner};
use crate::belief::EncoderKind;
use crate::env::{ActionSet, TrackDataset};
use crate::error::{Error, Result};

/// Encoder and masking choice of a trained model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variant {
    pub encoder: EncoderKind,
    pub mask_repeats: bool,
}

impl Variant {
    pub const NB: Variant = Variant {
        encoder: EncoderKind::NaiveBayes,
        mask_repeats: false,
    };
    pub const DR: Variant = Variant {
        encoder: EncoderKind::Dirichlet,
        mask_repeats: false,
    };
    pub const DN: Variant = Variant {
        encoder: EncoderKind::Dirichlet,
        mask_repeats: true,
    };

    pub fn short_name(self) -> String {
        match (self.encoder, self.mask_repeats) {
            (EncoderKind::NaiveBayes, false) => "NB".into(),
            (EncoderKind::NaiveBayes, true) => "NBN".into(),
            (EncoderKind::Dirichlet, false) => "DR".into(),
            (EncoderKind::Dirichlet, true) => "DN".into(),
        }
    }
}

/// A variant evaluated under one policy, e.g. `DN-DAOR`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunSpec {
    pub variant: Variant,
    pub policy: Policy,
}

impl RunSpec {
    pub fn name(&self) -> String {
        format!("{}-{}", self.variant.short_name(), self.policy.short_name())
    }
}

/// NB, DR and DN each under the random and the learned policy.
pub fn grid() -> Vec<RunSpec> {
    let mut runs = Vec::new();
    for variant in [Variant::NB, Variant::DR, Variant::DN] {
        for policy in [Policy::Random, Policy::Learned] {
            runs.push(RunSpec { variant, policy });
        }
    }
    runs
}

/// Every `(track index, recorded pose)` of the dataset, in order.
pub fn episode_starts(dataset: &TrackDataset) -> Vec<(usize, usize)> {
    dataset
        .tracks()
        .iter()
        .enumerate()
        .flat_map(|(i, t)| t.bins().map(move |b| (i, b)))
        .collect()
}

/// Plays one greedy episode from every start of `dataset`. Episode `i`
/// draws its random actions from stream `i` of a generator seeded with
/// `seed`, so results do not depend on scheduling.
pub fn play_all(
    model: &Model,
    dataset: &TrackDataset,
    config: EpisodeConfig,
    policy: Policy,
    seed: u64,
) -> Result<Vec<EpisodeOutcome>> {
    if dataset.is_empty() {
        return Err(Error::Empty("evaluation dataset"));
    }
    let actions = ActionSet::rotations(dataset.num_bins(), config.boundary)?;
    let runner = Runner::new(&model.params, &model.table, &actions, config)?;
    episode_starts(dataset)
        .into_par_iter()
        .enumerate()
        .map(|(i, (track, pose))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            runner.run_episode(dataset, track, pose, policy, Mode::Eval, &mut rng)
        })
        .collect()
}

/// Correct-prediction counts after 1, …, T + 1 observed images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub correct: Vec<u64>,
    pub episodes: u64,
}

impl StepCounts {
    pub fn from_outcomes(outcomes: &[EpisodeOutcome], steps: usize) -> Self {
        let mut correct = vec![0; steps];
        for o in outcomes {
            for (c, ok) in correct.iter_mut().zip(o.correct()) {
                *c += u64::from(ok);
            }
        }
        Self {
            correct,
            episodes: outcomes.len() as u64,
        }
    }

    pub fn accuracy(&self) -> Vec<f64> {
        self.correct
            .iter()
            .map(|c| *c as f64 / self.episodes.max(1) as f64)
            .collect()
    }
}

/// Accuracy of one run spec, averaged over episodes and seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub name: String,
    pub run: RunSpec,
    pub seeds: Vec<u64>,
    /// `per_seed[i][t]`: accuracy of seed `i` after `t` moves.
    pub per_seed: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// Binomial standard error of the pooled mean.
    pub stderr: Vec<f64>,
    /// Episodes per seed.
    pub num_episodes: u64,
}

impl AccuracyRow {
    pub fn from_counts(run: RunSpec, counts: &[(u64, StepCounts)]) -> Result<Self> {
        let Some((_, first)) = counts.first() else {
            return Err(Error::Empty("seed results"));
        };
        let steps = first.correct.len();
        let mut correct = vec![0u64; steps];
        let mut total = 0u64;
        for (_, c) in counts {
            if c.correct.len() != steps || c.episodes != first.episodes {
                return Err(Error::Dimension {
                    what: "per-seed step counts",
                    expected: steps,
                    actual: c.correct.len(),
                });
            }
            for (dst, v) in correct.iter_mut().zip(&c.correct) {
                *dst += v;
            }
            total += c.episodes;
        }
        let mean: Vec<f64> = correct.iter().map(|c| *c as f64 / total as f64).collect();
        let stderr = mean
            .iter()
            .map(|p| (p * (1.0 - p) / total as f64).sqrt())
            .collect();
        Ok(Self {
            name: run.name(),
            run,
            seeds: counts.iter().map(|(s, _)| *s).collect(),
            per_seed: counts.iter().map(|(_, c)| c.accuracy()).collect(),
            mean,
            stderr,
            num_episodes: first.episodes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AccuracyTable {
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyTable {
    pub fn row(&self, name: &str) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// `name,t0,…,tT` means, then the same with a `stderr` suffix.
    pub fn to_csv(&self) -> String {
        let steps = self.rows.iter().map(|r| r.mean.len()).max().unwrap_or(0);
        let mut out = String::from("policy,kind");
        for t in 0..steps {
            let _ = write!(out, ",{t}");
        }
        out.push('\n');
        for r in &self.rows {
            for (kind, values) in [("mean", &r.mean), ("stderr", &r.stderr)] {
                let _ = write!(out, "{},{kind}", r.name);
                for v in values {
                    let _ = write!(out, ",{v}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// One line per (row, seed) with that seed's per-step accuracy.
    pub fn per_seed_csv(&self) -> String {
        let mut out = String::from("policy,seed,step,accuracy\n");
        for r in &self.rows {
            for (seed, acc) in r.seeds.iter().zip(&r.per_seed) {
                for (t, a) in acc.iter().enumerate() {
                    let _ = writeln!(out, "{},{seed},{t},{a}", r.name);
                }
            }
        }
        out
    }
}

/// Accuracy-vs-observations for `policy`, one trained model per seed.
pub fn evaluate(
    models: &[(u64, &Model)],
    dataset: &TrackDataset,
    config: EpisodeConfig,
    policy: Policy,
) -> Result<AccuracyRow> {
    let counts = models
        .iter()
        .map(|(seed, model)| {
            let outcomes = play_all(model, dataset, config, policy, *seed)?;
            Ok((
                *seed,
                StepCounts::from_outcomes(&outcomes, config.moves_per_sequence + 1),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let run = RunSpec {
        variant: Variant {
            encoder: config.encoder,
            mask_repeats: config.mask_repeats,
        },
        policy,
    };
    AccuracyRow::from_counts(run, &counts)
}
