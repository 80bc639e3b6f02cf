//! Synthetic stand-in for recorded object tracks.
//!
//! Each class gets a feature prototype per pose bin: a class center plus a
//! pose signal shared by all classes plus a smaller class-specific view
//! signal. Inside an ambiguity group's bin range every class of the group
//! uses the prototype of the group's lowest class, so those views cannot
//! tell the group apart. Records are prototypes plus Gaussian noise drawn
//! once at generation time.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::dataset::{Track, TrackDataset};
use crate::error::{Error, Result};

/// Classes that share prototypes on bins `[start, end)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityGroup {
    pub classes: Vec<usize>,
    pub start: usize,
    pub end: usize,
}

impl AmbiguityGroup {
    pub fn contains(&self, class: usize, bin: usize) -> bool {
        (self.start..self.end).contains(&bin) && self.classes.contains(&class)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub num_classes: usize,
    pub num_bins: usize,
    pub feature_dim: usize,
    pub tracks_per_object: usize,
    /// Empty means every view is discriminative.
    pub ambiguity: Vec<AmbiguityGroup>,
    pub noise_sigma: f64,
    pub class_scale: f64,
    pub pose_scale: f64,
    pub view_scale: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            num_classes: 8,
            num_bins: 128,
            feature_dim: 8,
            tracks_per_object: 6,
            ambiguity: paired_ambiguity(8, 0, 64),
            noise_sigma: 1.0,
            class_scale: 1.0,
            pose_scale: 1.0,
            view_scale: 0.5,
        }
    }
}

/// Classes `{2i, 2i + 1}` confusable on `[start, end)` for every pair.
pub fn paired_ambiguity(num_classes: usize, start: usize, end: usize) -> Vec<AmbiguityGroup> {
    (0..num_classes / 2)
        .map(|i| AmbiguityGroup {
            classes: vec![2 * i, 2 * i + 1],
            start,
            end,
        })
        .collect()
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.num_classes < 2 {
            return bad(format!("need C >= 2, got {}", self.num_classes));
        }
        if self.num_bins < 8 {
            return bad(format!("need K >= 8, got {}", self.num_bins));
        }
        if self.feature_dim == 0 || self.tracks_per_object == 0 {
            return bad("feature_dim and tracks_per_object must be positive".into());
        }
        for (name, v) in [
            ("noise_sigma", self.noise_sigma),
            ("class_scale", self.class_scale),
            ("pose_scale", self.pose_scale),
            ("view_scale", self.view_scale),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        for g in &self.ambiguity {
            if g.classes.len() < 2 || g.classes.iter().any(|c| *c >= self.num_classes) {
                return bad(format!(
                    "ambiguity group {:?} needs >= 2 valid classes",
                    g.classes
                ));
            }
            if g.start >= g.end || g.end > self.num_bins {
                return bad(format!(
                    "ambiguity range [{}, {}) outside [0, {})",
                    g.start, g.end, self.num_bins
                ));
            }
        }
        Ok(())
    }
}

/// Prototype generator behind [`gen_synthetic`].
#[derive(Debug, Clone)]
pub struct SyntheticWorld {
    config: SyntheticConfig,
    centers: Vec<Vec<f64>>,
    pose_freq: Vec<f64>,
    pose_phase: Vec<f64>,
    view_freq: Vec<Vec<f64>>,
    view_phase: Vec<Vec<f64>>,
    seed: u64,
}

impl SyntheticWorld {
    pub fn new(config: SyntheticConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = config.feature_dim;
        let c = config.num_classes;
        let centers = (0..c)
            .map(|_| {
                (0..d)
                    .map(|_| config.class_scale * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let pose_freq = (0..d).map(|_| rng.random_range(1..=2) as f64).collect();
        let pose_phase = (0..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
        let view_freq = (0..c)
            .map(|_| (0..d).map(|_| rng.random_range(1..=3) as f64).collect())
            .collect();
        let view_phase = (0..c)
            .map(|_| (0..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect())
            .collect();
        Ok(Self {
            config,
            centers,
            pose_freq,
            pose_phase,
            view_freq,
            view_phase,
            seed,
        })
    }

    pub fn config(&self) -> &SyntheticConfig {
        &self.config
    }

    /// The class whose prototype `class` shows at `bin`.
    pub fn apparent_class(&self, class: usize, bin: usize) -> usize {
        self.config
            .ambiguity
            .iter()
            .find(|g| g.contains(class, bin))
            .map(|g| *g.classes.iter().min().expect("groups are non-empty"))
            .unwrap_or(class)
    }

    pub fn prototype(&self, class: usize, bin: usize) -> Vec<f64> {
        let shown = self.apparent_class(class, bin);
        let angle = 2.0 * PI * bin as f64 / self.config.num_bins as f64;
        (0..self.config.feature_dim)
            .map(|j| {
                self.centers[shown][j]
                    + self.config.pose_scale
                        * (self.pose_freq[j] * angle + self.pose_phase[j]).sin()
                    + self.config.view_scale
                        * (self.view_freq[shown][j] * angle + self.view_phase[shown][j]).sin()
            })
            .collect()
    }

    /// Every object gets `tracks_per_object` full tracks over all bins.
    pub fn sample_dataset(&self) -> Result<TrackDataset> {
        // Separate stream so prototypes and noise never share draws.
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(1);
        let noise = Normal::new(0.0, self.config.noise_sigma)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let mut tracks = Vec::new();
        for object in 0..self.config.num_classes {
            for track_id in 0..self.config.tracks_per_object {
                let mut poses = BTreeMap::new();
                for bin in 0..self.config.num_bins {
                    let mut f = self.prototype(object, bin);
                    if self.config.noise_sigma > 0.0 {
                        for v in f.iter_mut() {
                            *v += noise.sample(&mut rng);
                        }
                    }
                    poses.insert(bin, f);
                }
                tracks.push(Track {
                    object,
                    track_id,
                    poses,
                });
            }
        }
        TrackDataset::new(
            self.config.num_classes,
            self.config.num_bins,
            self.config.feature_dim,
            tracks,
        )
    }
}

/// Deterministic synthetic track set for `seed`.
pub fn gen_synthetic(config: &SyntheticConfig, seed: u64) -> Result<TrackDataset> {
    SyntheticWorld::new(config.clone(), seed)?.sample_dataset()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(noise: f64, ambiguity: Vec<AmbiguityGroup>) -> SyntheticConfig {
        SyntheticConfig {
            num_classes: 4,
            num_bins: 16,
            feature_dim: 5,
            tracks_per_object: 2,
            ambiguity,
            noise_sigma: noise,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn same_seed_same_dataset() {
        let cfg = small(0.3, vec![]);
        assert_eq!(
            gen_synthetic(&cfg, 5).unwrap(),
            gen_synthetic(&cfg, 5).unwrap()
        );
        assert_ne!(
            gen_synthetic(&cfg, 5).unwrap(),
            gen_synthetic(&cfg, 6).unwrap()
        );
    }

    #[test]
    fn shape_matches_config() {
        let ds = gen_synthetic(&small(0.1, vec![]), 1).unwrap();
        assert_eq!(ds.tracks().len(), 4 * 2);
        assert_eq!(ds.num_observations(), 4 * 2 * 16);
        assert!(ds
            .tracks()
            .iter()
            .flat_map(|t| t.poses.values())
            .all(|f| f.len() == 5));
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = small(0.1, vec![]);
        cfg.num_classes = 1;
        assert!(gen_synthetic(&cfg, 0).is_err());
        let mut cfg = small(0.1, vec![]);
        cfg.num_bins = 4;
        assert!(gen_synthetic(&cfg, 0).is_err());
        let cfg = small(
            0.1,
            vec![AmbiguityGroup {
                classes: vec![0, 9],
                start: 0,
                end: 4,
            }],
        );
        assert!(gen_synthetic(&cfg, 0).is_err());
        let mut cfg = small(0.1, vec![]);
        cfg.noise_sigma = -1.0;
        assert!(gen_synthetic(&cfg, 0).is_err());
    }

    #[test]
    fn ambiguous_bins_share_prototypes() {
        let group = AmbiguityGroup {
            classes: vec![0, 1],
            start: 0,
            end: 8,
        };
        let world = SyntheticWorld::new(small(0.0, vec![group]), 2).unwrap();
        for bin in 0..8 {
            assert_eq!(world.prototype(0, bin), world.prototype(1, bin));
        }
        for bin in 8..16 {
            assert_ne!(world.prototype(0, bin), world.prototype(1, bin));
        }
        assert_ne!(world.prototype(2, 3), world.prototype(3, 3));
    }
}
