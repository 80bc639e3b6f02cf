use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::accuracy::{evaluate, AccuracyTable, RunSpec, Variant};
use crate::agent::{train, EpisodeConfig, Model, TrainConfig};
use crate::env::TrackDataset;
use crate::error::{Error, Result};
use crate::net::NetworkSpec;

/// Difference between two rows of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDelta {
    pub a: String,
    pub b: String,
    /// `mean(a) − mean(b)` per step.
    pub delta: Vec<f64>,
    /// Per step, seeds where `a` beat, tied and lost to `b`.
    pub wins: Vec<usize>,
    pub ties: Vec<usize>,
    pub losses: Vec<usize>,
}

impl PairDelta {
    pub fn between(
        a: &super::accuracy::AccuracyRow,
        b: &super::accuracy::AccuracyRow,
    ) -> Result<Self> {
        if a.seeds != b.seeds || a.mean.len() != b.mean.len() {
            return Err(Error::InvalidParameter(format!(
                "rows {} and {} cover different seeds or steps",
                a.name, b.name
            )));
        }
        let steps = a.mean.len();
        let mut wins = vec![0; steps];
        let mut ties = vec![0; steps];
        let mut losses = vec![0; steps];
        for (sa, sb) in a.per_seed.iter().zip(&b.per_seed) {
            for t in 0..steps {
                match sa[t].partial_cmp(&sb[t]) {
                    Some(std::cmp::Ordering::Greater) => wins[t] += 1,
                    Some(std::cmp::Ordering::Less) => losses[t] += 1,
                    _ => ties[t] += 1,
                }
            }
        }
        Ok(Self {
            a: a.name.clone(),
            b: b.name.clone(),
            delta: a.mean.iter().zip(&b.mean).map(|(x, y)| x - y).collect(),
            wins,
            ties,
            losses,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub table: AccuracyTable,
    pub deltas: Vec<PairDelta>,
}

impl ComparisonReport {
    pub fn delta(&self, a: &str, b: &str) -> Option<&PairDelta> {
        self.deltas.iter().find(|d| d.a == a && d.b == b)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Models of one variant, one per seed.
pub type SeedModels = Vec<(u64, Model)>;

/// Evaluates each run spec with already trained models and reports every
/// ordered pair `(i, j)`, `i < j`.
pub fn compare_models(
    runs: &[RunSpec],
    models: &BTreeMap<Variant, SeedModels>,
    dataset: &TrackDataset,
    episode: EpisodeConfig,
) -> Result<ComparisonReport> {
    if runs.len() < 2 {
        return Err(Error::InvalidParameter(
            "compare needs at least two run specs".into(),
        ));
    }
    let mut table = AccuracyTable::default();
    for run in runs {
        let seeded = models.get(&run.variant).ok_or_else(|| {
            Error::InvalidParameter(format!("no models for {}", run.variant.short_name()))
        })?;
        let refs: Vec<(u64, &Model)> = seeded.iter().map(|(s, m)| (*s, m)).collect();
        let cfg = EpisodeConfig {
            encoder: run.variant.encoder,
            mask_repeats: run.variant.mask_repeats,
            ..episode
        };
        let mut row = evaluate(&refs, dataset, cfg, run.policy)?;
        row.run = *run;
        row.name = run.name();
        table.rows.push(row);
    }
    let mut deltas = Vec::new();
    for i in 0..table.rows.len() {
        for j in i + 1..table.rows.len() {
            deltas.push(PairDelta::between(&table.rows[i], &table.rows[j])?);
        }
    }
    Ok(ComparisonReport { table, deltas })
}

/// Trains every distinct variant of `runs` once per seed (policies share
/// models), then evaluates on `test`.
pub fn compare(
    runs: &[RunSpec],
    train_data: &TrackDataset,
    test_data: &TrackDataset,
    spec: &NetworkSpec,
    base: &TrainConfig,
    seeds: &[u64],
) -> Result<ComparisonReport> {
    if runs.len() < 2 {
        return Err(Error::InvalidParameter(
            "compare needs at least two run specs".into(),
        ));
    }
    let models = train_variants(runs, train_data, spec, base, seeds)?;
    compare_models(runs, &models, test_data, base.episode())
}

/// One model per (distinct variant, seed), trained in parallel.
pub fn train_variants(
    runs: &[RunSpec],
    train_data: &TrackDataset,
    spec: &NetworkSpec,
    base: &TrainConfig,
    seeds: &[u64],
) -> Result<BTreeMap<Variant, SeedModels>> {
    let mut variants: Vec<Variant> = runs.iter().map(|r| r.variant).collect();
    variants.sort();
    variants.dedup();
    let jobs: Vec<(Variant, u64)> = variants
        .iter()
        .flat_map(|v| seeds.iter().map(move |s| (*v, *s)))
        .collect();
    let trained = jobs
        .par_iter()
        .map(|(variant, seed)| {
            let cfg = TrainConfig {
                encoder: variant.encoder,
                mask_repeats: variant.mask_repeats,
                seed: *seed,
                ..base.clone()
            };
            train(train_data, spec, &cfg)
                .map(|out| (*variant, *seed, out.model))
                .map_err(|abort| abort.source)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut models: BTreeMap<Variant, SeedModels> = BTreeMap::new();
    for (variant, seed, model) in trained {
        models.entry(variant).or_default().push((seed, model));
    }
    Ok(models)
}
