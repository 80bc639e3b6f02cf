#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use aor_core::belief::batch_log_likelihood;
use aor_core::belief::BeliefVector;
use aor_core::env::{gen_synthetic, SyntheticConfig, TrackDataset};
use aor_core::net::{CostTerms, LatestBlock, NetworkParams, NetworkSpec, Sample};

pub const BENCH_DATA_SEED: u64 = 7;
pub const TRAIN_TRACKS_PER_OBJECT: usize = 3;

/// The ambiguous-pose benchmark: 8 classes, 128 bins, 8 features, paired
/// classes indistinguishable on the first half of the bins.
pub fn benchmark() -> (TrackDataset, TrackDataset) {
    gen_synthetic(&SyntheticConfig::default(), BENCH_DATA_SEED)
        .unwrap()
        .partition(TRAIN_TRACKS_PER_OBJECT)
}

pub fn separable_config() -> SyntheticConfig {
    SyntheticConfig {
        ambiguity: Vec::new(),
        noise_sigma: 0.0,
        class_scale: 3.0,
        ..SyntheticConfig::default()
    }
}

/// Noiseless data where every view identifies its class.
pub fn separable() -> (TrackDataset, TrackDataset) {
    gen_synthetic(&separable_config(), BENCH_DATA_SEED)
        .unwrap()
        .partition(TRAIN_TRACKS_PER_OBJECT)
}

pub fn bench_spec(data: &TrackDataset) -> NetworkSpec {
    NetworkSpec {
        input_dim: data.feature_dim(),
        hidden_dims: vec![32],
        feature_dim: 16,
        num_classes: data.num_classes(),
        num_actions: 10,
        q_hidden_dims: vec![32],
        latest_block: LatestBlock::Features,
        dropout: 0.0,
    }
}

pub fn random_simplex(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let g = Gamma::<f64>::new(1.0, 1.0).unwrap();
    let w: Vec<f64> = (0..len).map(|_| g.sample(rng).max(1e-300)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

pub fn draw_dirichlet(alpha: &[f64], rng: &mut ChaCha8Rng) -> BeliefVector {
    let w = alpha
        .iter()
        .map(|a| Gamma::new(*a, 1.0).unwrap().sample(rng).max(1e-300))
        .collect();
    BeliefVector::from_weights(w).unwrap()
}

pub fn normal_vec(len: usize, scale: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        })
        .collect()
}

/// A small network of random shape.
pub fn random_spec(rng: &mut ChaCha8Rng) -> NetworkSpec {
    let hidden = (0..rng.random_range(1..=2))
        .map(|_| rng.random_range(2..=6))
        .collect();
    NetworkSpec {
        input_dim: rng.random_range(1..=5),
        hidden_dims: hidden,
        feature_dim: rng.random_range(2..=5),
        num_classes: rng.random_range(2..=4),
        num_actions: rng.random_range(1..=4),
        q_hidden_dims: (0..rng.random_range(0..=1))
            .map(|_| rng.random_range(2..=5))
            .collect(),
        latest_block: if rng.random_bool(0.5) {
            LatestBlock::Features
        } else {
            LatestBlock::Belief
        },
        dropout: 0.0,
    }
}

/// Owned storage for a batch of [`Sample`]s.
pub struct OwnedSample {
    pub observation: Vec<f64>,
    pub state_block: Vec<f64>,
    pub label: usize,
    pub action: usize,
    pub target_q: f64,
}

impl OwnedSample {
    pub fn view(&self) -> Sample<'_> {
        Sample {
            observation: &self.observation,
            state_block: &self.state_block,
            label: self.label,
            action: self.action,
            target_q: self.target_q,
        }
    }
}

pub fn random_batch(spec: &NetworkSpec, size: usize, rng: &mut ChaCha8Rng) -> Vec<OwnedSample> {
    (0..size)
        .map(|_| OwnedSample {
            observation: normal_vec(spec.input_dim, 1.0, rng),
            state_block: (0..spec.num_actions)
                .flat_map(|_| random_simplex(spec.num_classes, rng))
                .collect(),
            label: rng.random_range(0..spec.num_classes),
            action: rng.random_range(0..spec.num_actions),
            target_q: normal_vec(1, 1.0, rng)[0],
        })
        .collect()
}

/// Glorot weights plus random biases so that ReLUs sit on both sides of 0.
pub fn random_params(spec: &NetworkSpec, rng: &mut ChaCha8Rng) -> NetworkParams {
    let mut p = NetworkParams::init(spec.clone(), rng.random()).unwrap();
    let flat: Vec<f64> = p
        .flat()
        .iter()
        .map(|w| w + 0.1 * normal_vec(1, 1.0, rng)[0])
        .collect();
    p.set_flat(&flat).unwrap();
    p
}

/// Largest componentwise `|a − b| / max(|a|, |b|, 1)`.
pub fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0))
        .fold(0.0, f64::max)
}

/// Central differences of the selected batch cost in every parameter.
pub fn fd_network_grad(
    params: &NetworkParams,
    batch: &[Sample<'_>],
    terms: CostTerms,
    h: f64,
) -> Vec<f64> {
    let base = params.flat();
    let mut p = params.clone();
    let mut out = Vec::with_capacity(base.len());
    let mut theta = base.clone();
    for i in 0..base.len() {
        theta[i] = base[i] + h;
        p.set_flat(&theta).unwrap();
        let up = p.costs(batch).unwrap().select(terms);
        theta[i] = base[i] - h;
        p.set_flat(&theta).unwrap();
        let down = p.costs(batch).unwrap().select(terms);
        theta[i] = base[i];
        out.push((up - down) / (2.0 * h));
    }
    out
}

/// Central differences of the batch log-likelihood in each `α_k`.
pub fn fd_dirichlet_grad(samples: &[BeliefVector], alpha: &[f64]) -> Vec<f64> {
    (0..alpha.len())
        .map(|k| {
            let h = 1e-6 * alpha[k];
            let mut up = alpha.to_vec();
            up[k] += h;
            let mut down = alpha.to_vec();
            down[k] -= h;
            (batch_log_likelihood(samples, &up).unwrap()
                - batch_log_likelihood(samples, &down).unwrap())
                / (2.0 * h)
        })
        .collect()
}
