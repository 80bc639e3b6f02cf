use std::collections::BTreeSet;

use super::actions::ActionSet;
use super::dataset::TrackDataset;
use crate::belief::argmax;
use crate::error::{Error, Result};

/// Position of one interaction sequence on one track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodeState {
    pub object: usize,
    /// Index into [`TrackDataset::tracks`].
    pub track: usize,
    pub pose_bin: usize,
    pub visited: BTreeSet<usize>,
    pub step: usize,
}

impl EpisodeState {
    /// Starts an episode at `initial_pose` of track `track` (dataset index).
    pub fn reset(
        dataset: &TrackDataset,
        track: usize,
        initial_pose: usize,
    ) -> Result<(Self, &[f64])> {
        let t = dataset.tracks().get(track).ok_or(Error::OutOfRange {
            what: "track index",
            index: track,
            limit: dataset.tracks().len(),
        })?;
        let obs = dataset
            .observation(track, initial_pose)
            .ok_or(Error::MissingPose {
                object: t.object,
                track: t.track_id,
                pose: initial_pose,
            })?;
        let state = Self {
            object: t.object,
            track,
            pose_bin: initial_pose,
            visited: BTreeSet::from([initial_pose]),
            step: 0,
        };
        Ok((state, obs))
    }

    /// Same as [`reset`](Self::reset) but addressed by `(object, track_id)`.
    pub fn reset_by_id(
        dataset: &TrackDataset,
        object: usize,
        track_id: usize,
        initial_pose: usize,
    ) -> Result<(Self, &[f64])> {
        let track = dataset.find_track(object, track_id).ok_or_else(|| {
            Error::InvalidParameter(format!("no track {track_id} for object {object}"))
        })?;
        Self::reset(dataset, track, initial_pose)
    }

    /// Pose that `action` would lead to, snapped to the nearest recorded bin.
    pub fn resolve(&self, action: usize, actions: &ActionSet, dataset: &TrackDataset) -> usize {
        let target = actions.target_bin(self.pose_bin, action);
        dataset.track(self.track).nearest_bin(target)
    }

    /// Applies `action` and returns the observation at the new pose.
    pub fn step<'d>(
        &mut self,
        action: usize,
        actions: &ActionSet,
        dataset: &'d TrackDataset,
    ) -> &'d [f64] {
        let pose = self.resolve(action, actions, dataset);
        self.pose_bin = pose;
        self.visited.insert(pose);
        self.step += 1;
        dataset
            .observation(self.track, pose)
            .expect("resolved poses are recorded")
    }
}

/// Correct-label reward: +1 when the argmax of `belief` is `label`, else −1.
pub fn reward(belief: &[f64], label: usize) -> f64 {
    if argmax(belief) == label {
        1.0
    } else {
        -1.0
    }
}
