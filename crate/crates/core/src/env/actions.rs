use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rotation magnitudes of the gripper actions, in radians.
pub const ROTATION_MAGNITUDES: [f64; 5] = [PI / 4.0, PI / 8.0, PI / 16.0, PI / 32.0, PI / 64.0];

/// What happens when a rotation would leave the joint range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Stop at the range edge.
    #[default]
    Clamp,
    /// Wrap around (ablation only).
    Wrap,
}

/// Relative rotations expressed as signed pose-bin offsets.
///
/// Actions are ordered `+π/4, −π/4, +π/8, −π/8, …, +π/64, −π/64`, so action
/// `2i` and `2i + 1` form a ± pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSet {
    offsets: Vec<i64>,
    num_bins: usize,
    boundary: Boundary,
}

impl ActionSet {
    /// The ten gripper rotations over `num_bins` bins spanning 2π.
    ///
    /// Offsets are rounded to the nearest bin (at least one); at 128 bins
    /// they are exactly ±16, ±8, ±4, ±2, ±1.
    pub fn rotations(num_bins: usize, boundary: Boundary) -> Result<Self> {
        if num_bins < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 pose bins, got {num_bins}"
            )));
        }
        let bin_width = 2.0 * PI / num_bins as f64;
        let mut offsets = Vec::with_capacity(2 * ROTATION_MAGNITUDES.len());
        for m in ROTATION_MAGNITUDES {
            let bins = ((m / bin_width).round() as i64).max(1);
            offsets.push(bins);
            offsets.push(-bins);
        }
        Ok(Self {
            offsets,
            num_bins,
            boundary,
        })
    }

    pub fn from_offsets(offsets: Vec<i64>, num_bins: usize, boundary: Boundary) -> Result<Self> {
        if offsets.is_empty() || num_bins < 2 {
            return Err(Error::InvalidConfig(
                "action set needs offsets and at least 2 bins".into(),
            ));
        }
        Ok(Self {
            offsets,
            num_bins,
            boundary,
        })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn offset(&self, action: usize) -> i64 {
        self.offsets[action]
    }

    /// Rotation in radians, `offset · 2π / K`.
    pub fn radians(&self, action: usize) -> f64 {
        self.offsets[action] as f64 * 2.0 * PI / self.num_bins as f64
    }

    /// Pose bin reached from `pose` by `action`.
    pub fn target_bin(&self, pose: usize, action: usize) -> usize {
        let k = self.num_bins as i64;
        let raw = pose as i64 + self.offsets[action];
        match self.boundary {
            Boundary::Clamp => raw.clamp(0, k - 1) as usize,
            Boundary::Wrap => raw.rem_euclid(k) as usize,
        }
    }

    /// The action with the same magnitude and opposite sign, if any.
    pub fn opposite(&self, action: usize) -> Option<usize> {
        let want = -self.offsets[action];
        self.offsets.iter().position(|o| *o == want)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_at_128_bins() {
        let a = ActionSet::rotations(128, Boundary::Clamp).unwrap();
        assert_eq!(a.offsets(), &[16, -16, 8, -8, 4, -4, 2, -2, 1, -1]);
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn radians_match_rotation_set() {
        let a = ActionSet::rotations(128, Boundary::Clamp).unwrap();
        for (i, m) in ROTATION_MAGNITUDES.iter().enumerate() {
            assert!((a.radians(2 * i) - m).abs() < 1e-15);
            assert!((a.radians(2 * i + 1) + m).abs() < 1e-15);
        }
    }

    #[test]
    fn step_examples() {
        let a = ActionSet::rotations(128, Boundary::Clamp).unwrap();
        assert_eq!(a.target_bin(64, 0), 80);
        assert_eq!(a.target_bin(120, 0), 127);
        assert_eq!(a.target_bin(3, 1), 0);
        for act in 0..a.len() {
            let opp = a.opposite(act).unwrap();
            assert_eq!(a.target_bin(a.target_bin(64, act), opp), 64);
        }
        let w = ActionSet::rotations(128, Boundary::Wrap).unwrap();
        assert_eq!(w.target_bin(120, 0), 8);
        assert_eq!(w.target_bin(3, 1), 115);
    }
}
