use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use aor_core::agent::{Policy, TrainConfig};
use aor_core::env::{
    gen_synthetic, load_tracks, SyntheticConfig, TrackDataset, ROTATION_MAGNITUDES,
};
use aor_core::net::{LatestBlock, NetworkSpec};

/// Everything a command needs. Every field has a default; a config file
/// overrides defaults and `--set`/flags override the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads for evaluation; 0 uses all cores.
    pub threads: usize,
    pub data: DataConfig,
    pub network: NetworkConfig,
    pub train: TrainConfig,
    pub eval: EvalConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            out: PathBuf::from("out"),
            threads: 0,
            data: DataConfig::default(),
            network: NetworkConfig::default(),
            train: TrainConfig::default(),
            eval: EvalConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// Track file; empty means generate synthetic tracks.
    pub path: PathBuf,
    /// Seed of the synthetic generator, kept apart from training seeds.
    pub seed: u64,
    pub train_tracks_per_object: usize,
    pub synthetic: SyntheticConfig,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::new(),
            seed: 7,
            train_tracks_per_object: 3,
            synthetic: SyntheticConfig::default(),
        }
    }
}

/// Network widths; input, class and action counts come from the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub hidden_dims: Vec<usize>,
    pub feature_dim: usize,
    pub q_hidden_dims: Vec<usize>,
    pub latest_block: LatestBlock,
    pub dropout: f64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            hidden_dims: vec![32],
            feature_dim: 16,
            q_hidden_dims: vec![32],
            latest_block: LatestBlock::Features,
            dropout: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub policy: Policy,
    /// Training seeds used by `eval --grid`.
    pub seeds: Vec<u64>,
    pub grid: bool,
    pub checkpoints: Vec<PathBuf>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            policy: Policy::Learned,
            seeds: (0..10).collect(),
            grid: false,
            checkpoints: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string_pretty(self)?)
    }

    /// Applies `key.path=value`; the value is read as a TOML literal and
    /// falls back to a bare string.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| anyhow!("override {assignment:?} is not key=value"))?;
        let key = key.trim();
        let value = parse_literal(raw.trim());
        let mut doc = toml::Table::try_from(&*self)?;
        let mut parts = key.split('.').peekable();
        let mut table = &mut doc;
        while let Some(part) = parts.next() {
            if parts.peek().is_none() {
                table.insert(part.to_string(), value);
                break;
            }
            table = table
                .entry(part.to_string())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .ok_or_else(|| anyhow!("{key}: {part} is not a section"))?;
        }
        *self = toml::Value::Table(doc)
            .try_into()
            .with_context(|| format!("applying override {key}"))?;
        Ok(())
    }

    pub fn dataset(&self) -> Result<TrackDataset> {
        if self.data.path.as_os_str().is_empty() {
            Ok(gen_synthetic(&self.data.synthetic, self.data.seed)?)
        } else {
            load_tracks(&self.data.path)
                .with_context(|| format!("loading tracks {}", self.data.path.display()))
        }
    }

    /// `(train, test)` splits of the configured dataset.
    pub fn splits(&self) -> Result<(TrackDataset, TrackDataset)> {
        let all = self.dataset()?;
        let (train, test) = all.partition(self.data.train_tracks_per_object);
        if train.is_empty() {
            bail!("training split is empty");
        }
        Ok((train, test))
    }

    pub fn network_spec(&self, dataset: &TrackDataset) -> NetworkSpec {
        NetworkSpec {
            input_dim: dataset.feature_dim(),
            hidden_dims: self.network.hidden_dims.clone(),
            feature_dim: self.network.feature_dim,
            num_classes: dataset.num_classes(),
            num_actions: 2 * ROTATION_MAGNITUDES.len(),
            q_hidden_dims: self.network.q_hidden_dims.clone(),
            latest_block: self.network.latest_block,
            dropout: self.network.dropout,
        }
    }

    /// Training settings with the run seed applied.
    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            seed: self.seed,
            ..self.train.clone()
        }
    }
}

fn parse_literal(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use aor_core::belief::EncoderKind;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = RunConfig::default();
        let back: RunConfig = toml::from_str(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn overrides_apply_typed_values() {
        let mut cfg = RunConfig::default();
        cfg.set("train.num_iterations=10").unwrap();
        cfg.set("train.encoder=naive_bayes").unwrap();
        cfg.set("data.synthetic.noise_sigma = 0.25").unwrap();
        cfg.set("network.hidden_dims=[4, 5]").unwrap();
        assert_eq!(cfg.train.num_iterations, 10);
        assert_eq!(cfg.train.encoder, EncoderKind::NaiveBayes);
        assert_eq!(cfg.data.synthetic.noise_sigma, 0.25);
        assert_eq!(cfg.network.hidden_dims, vec![4, 5]);
    }

    #[test]
    fn bad_overrides_are_rejected() {
        let mut cfg = RunConfig::default();
        assert!(cfg.set("train.num_iterations").is_err());
        assert!(cfg.set("train.num_iterations=minus").is_err());
        assert!(cfg.set("train.no_such_key=1").is_err());
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: RunConfig = toml::from_str("seed = 3\n[train]\nnum_iterations = 5\n").unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.train.num_iterations, 5);
        assert_eq!(cfg.train.minibatch_size, 128);
        assert_eq!(cfg.network, NetworkConfig::default());
    }
}
