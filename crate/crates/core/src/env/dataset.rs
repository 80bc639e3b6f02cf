//! Pose-indexed feature tracks and their comma-separated file format.
//!
//! ```text
//! C,K,feature_dim
//! object_id,track_id,pose_bin,f_1,...,f_d
//! ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    #[default]
    All,
    Train,
    Test,
}

/// One recorded rotation of one object: pose bin → feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub object: usize,
    pub track_id: usize,
    pub poses: BTreeMap<usize, Vec<f64>>,
}

impl Track {
    pub fn bins(&self) -> impl Iterator<Item = usize> + '_ {
        self.poses.keys().copied()
    }

    /// Closest recorded bin to `bin`; ties go to the lower bin.
    pub fn nearest_bin(&self, bin: usize) -> usize {
        if self.poses.contains_key(&bin) {
            return bin;
        }
        let below = self.poses.range(..bin).next_back().map(|(b, _)| *b);
        let above = self.poses.range(bin..).next().map(|(b, _)| *b);
        match (below, above) {
            (Some(lo), Some(hi)) => {
                if bin - lo <= hi - bin {
                    lo
                } else {
                    hi
                }
            }
            (Some(lo), None) => lo,
            (None, Some(hi)) => hi,
            (None, None) => bin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackDataset {
    num_classes: usize,
    num_bins: usize,
    feature_dim: usize,
    tracks: Vec<Track>,
    split: Split,
}

impl TrackDataset {
    /// Validates dimensions and sorts tracks by `(object, track_id)`.
    pub fn new(
        num_classes: usize,
        num_bins: usize,
        feature_dim: usize,
        mut tracks: Vec<Track>,
    ) -> Result<Self> {
        if num_classes < 2 || num_bins == 0 || feature_dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "bad dataset header C={num_classes} K={num_bins} feature_dim={feature_dim}"
            )));
        }
        for t in &tracks {
            if t.object >= num_classes {
                return Err(Error::OutOfRange {
                    what: "object id",
                    index: t.object,
                    limit: num_classes,
                });
            }
            if t.poses.is_empty() {
                return Err(Error::Empty("track without poses"));
            }
            for (bin, f) in &t.poses {
                if *bin >= num_bins {
                    return Err(Error::OutOfRange {
                        what: "pose bin",
                        index: *bin,
                        limit: num_bins,
                    });
                }
                if f.len() != feature_dim {
                    return Err(Error::Dimension {
                        what: "feature vector",
                        expected: feature_dim,
                        actual: f.len(),
                    });
                }
            }
        }
        tracks.sort_by_key(|t| (t.object, t.track_id));
        if tracks
            .windows(2)
            .any(|w| (w[0].object, w[0].track_id) == (w[1].object, w[1].track_id))
        {
            return Err(Error::InvalidParameter(
                "duplicate (object, track) id".into(),
            ));
        }
        Ok(Self {
            num_classes,
            num_bins,
            feature_dim,
            tracks,
            split: Split::All,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_bins(&self) -> usize {
        self.num_bins
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn track(&self, index: usize) -> &Track {
        &self.tracks[index]
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn with_split(mut self, split: Split) -> Self {
        self.split = split;
        self
    }

    pub fn num_observations(&self) -> usize {
        self.tracks.iter().map(|t| t.poses.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tracks.is_empty()
    }

    pub fn find_track(&self, object: usize, track_id: usize) -> Option<usize> {
        self.tracks
            .binary_search_by_key(&(object, track_id), |t| (t.object, t.track_id))
            .ok()
    }

    pub fn observation(&self, track: usize, bin: usize) -> Option<&[f64]> {
        self.tracks.get(track)?.poses.get(&bin).map(Vec::as_slice)
    }

    /// Per object, the first `train_per_object` tracks (by id) go to the
    /// training split and the rest to the test split.
    pub fn partition(&self, train_per_object: usize) -> (TrackDataset, TrackDataset) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        let mut seen = vec![0usize; self.num_classes];
        for t in &self.tracks {
            if seen[t.object] < train_per_object {
                train.push(t.clone());
            } else {
                test.push(t.clone());
            }
            seen[t.object] += 1;
        }
        let make = |tracks, split| TrackDataset {
            num_classes: self.num_classes,
            num_bins: self.num_bins,
            feature_dim: self.feature_dim,
            tracks,
            split,
        };
        (make(train, Split::Train), make(test, Split::Test))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{},{},{}",
            self.num_classes, self.num_bins, self.feature_dim
        );
        for t in &self.tracks {
            for (bin, f) in &t.poses {
                let _ = write!(out, "{},{},{}", t.object, t.track_id, bin);
                for v in f {
                    let _ = write!(out, ",{v}");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(Error::NoRecords)?;
        let head = parse_fields::<usize>(header, header_line)?;
        if head.len() != 3 {
            return Err(Error::Parse {
                line: header_line,
                message: format!("header needs C,K,feature_dim; found {} fields", head.len()),
            });
        }
        let (num_classes, num_bins, feature_dim) = (head[0], head[1], head[2]);
        if num_classes < 2 || num_bins == 0 || feature_dim == 0 {
            return Err(Error::Parse {
                line: header_line,
                message: "header values must be C >= 2, K >= 1, feature_dim >= 1".into(),
            });
        }

        let mut tracks: BTreeMap<(usize, usize), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
        let mut records = 0;
        for (line, text) in lines {
            let fields: Vec<&str> = text.split(',').map(str::trim).collect();
            if fields.len() != 3 + feature_dim {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "dimension mismatch: expected {} feature values, found {}",
                        feature_dim,
                        fields.len().saturating_sub(3)
                    ),
                });
            }
            let ids = parse_fields::<usize>(&fields[..3].join(","), line)?;
            let (object, track_id, bin) = (ids[0], ids[1], ids[2]);
            if object >= num_classes {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown class id {object} (C = {num_classes})"),
                });
            }
            if bin >= num_bins {
                return Err(Error::Parse {
                    line,
                    message: format!("pose bin {bin} out of range [0, {num_bins})"),
                });
            }
            let features = parse_fields::<f64>(&fields[3..].join(","), line)?;
            if features.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    line,
                    message: "non-finite feature value".into(),
                });
            }
            let poses = tracks.entry((object, track_id)).or_default();
            if poses.insert(bin, features).is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!(
                        "duplicate record for object {object}, track {track_id}, pose {bin}"
                    ),
                });
            }
            records += 1;
        }
        if records == 0 {
            return Err(Error::NoRecords);
        }
        let tracks = tracks
            .into_iter()
            .map(|((object, track_id), poses)| Track {
                object,
                track_id,
                poses,
            })
            .collect();
        TrackDataset::new(num_classes, num_bins, feature_dim, tracks)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Reads and validates a track file.
pub fn load_tracks(path: impl AsRef<Path>) -> Result<TrackDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    TrackDataset::from_csv(&text)
}

fn parse_fields<T: std::str::FromStr>(text: &str, line: usize) -> Result<Vec<T>> {
    text.split(',')
        .map(|f| {
            let f = f.trim();
            f.parse::<T>().map_err(|_| Error::Parse {
                line,
                message: format!("cannot parse field {f:?}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_has_no_records() {
        assert!(matches!(TrackDataset::from_csv(""), Err(Error::NoRecords)));
        assert!(matches!(
            TrackDataset::from_csv("2,8,2\n"),
            Err(Error::NoRecords)
        ));
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        let ragged = "2,8,2\n0,0,1,0.5,0.5\n1,0,3,0.5\n";
        match TrackDataset::from_csv(ragged) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("dimension mismatch"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let pose = "2,8,2\n0,0,8,0.5,0.5\n";
        assert!(matches!(
            TrackDataset::from_csv(pose),
            Err(Error::Parse { line: 2, .. })
        ));
        let class = "2,8,2\n2,0,1,0.5,0.5\n";
        match TrackDataset::from_csv(class) {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("unknown class")),
            other => panic!("unexpected {other:?}"),
        }
        let garbage = "2,8,2\n0,0,x,0.5,0.5\n";
        assert!(matches!(
            TrackDataset::from_csv(garbage),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn nearest_bin_prefers_lower_on_tie() {
        let mut poses = BTreeMap::new();
        poses.insert(2, vec![0.0]);
        poses.insert(6, vec![0.0]);
        let t = Track {
            object: 0,
            track_id: 0,
            poses,
        };
        assert_eq!(t.nearest_bin(4), 2);
        assert_eq!(t.nearest_bin(5), 6);
        assert_eq!(t.nearest_bin(0), 2);
        assert_eq!(t.nearest_bin(100), 6);
        assert_eq!(t.nearest_bin(6), 6);
    }

    #[test]
    fn partition_takes_first_tracks_per_object() {
        let text = "2,4,1\n0,0,0,1\n0,1,0,1\n0,2,0,1\n1,5,0,1\n1,7,0,1\n";
        let ds = TrackDataset::from_csv(text).unwrap();
        let (train, test) = ds.partition(2);
        assert_eq!(train.split(), Split::Train);
        assert_eq!(test.split(), Split::Test);
        let ids = |d: &TrackDataset| {
            d.tracks()
                .iter()
                .map(|t| (t.object, t.track_id))
                .collect::<Vec<_>>()
        };
        assert_eq!(ids(&train), vec![(0, 0), (0, 1), (1, 5), (1, 7)]);
        assert_eq!(ids(&test), vec![(0, 2)]);
    }
}
