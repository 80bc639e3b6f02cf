use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::accuracy::play_all;
use crate::agent::{EpisodeConfig, EpisodeOutcome, Model, Policy};
use crate::env::TrackDataset;
use crate::error::{Error, Result};

/// Counts of consecutive action pairs: `counts[t][from * H + to]` is how
/// often action `from` at move `t` was followed by `to` at move `t + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionStats {
    pub num_actions: usize,
    pub episodes: u64,
    pub counts: Vec<Vec<u64>>,
}

impl TransitionStats {
    pub fn new(num_actions: usize, moves: usize) -> Self {
        Self {
            num_actions,
            episodes: 0,
            counts: vec![vec![0; num_actions * num_actions]; moves.saturating_sub(1)],
        }
    }

    pub fn add(&mut self, actions: &[usize]) -> Result<()> {
        if actions.len() != self.counts.len() + 1 {
            return Err(Error::Dimension {
                what: "episode actions",
                expected: self.counts.len() + 1,
                actual: actions.len(),
            });
        }
        for (t, w) in actions.windows(2).enumerate() {
            self.counts[t][w[0] * self.num_actions + w[1]] += 1;
        }
        self.episodes += 1;
        Ok(())
    }

    pub fn from_outcomes(
        outcomes: &[EpisodeOutcome],
        num_actions: usize,
        moves: usize,
    ) -> Result<Self> {
        let mut stats = Self::new(num_actions, moves);
        for o in outcomes {
            stats.add(&o.actions)?;
        }
        Ok(stats)
    }

    /// Adds another set of counts with the same shape.
    pub fn merge(&mut self, other: &TransitionStats) -> Result<()> {
        if other.num_actions != self.num_actions || other.counts.len() != self.counts.len() {
            return Err(Error::Dimension {
                what: "transition stats",
                expected: self.counts.len(),
                actual: other.counts.len(),
            });
        }
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
        self.episodes += other.episodes;
        Ok(())
    }

    pub fn step_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|m| m.iter().sum()).collect()
    }

    /// Share of the most frequent pair, averaged over move pairs.
    pub fn max_pair_share(&self) -> f64 {
        if self.counts.is_empty() || self.episodes == 0 {
            return 0.0;
        }
        let total: f64 = self
            .counts
            .iter()
            .map(|m| *m.iter().max().unwrap_or(&0) as f64 / self.episodes as f64)
            .sum();
        total / self.counts.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,from,to,count\n");
        for (t, m) in self.counts.iter().enumerate() {
            for (i, c) in m.iter().enumerate() {
                if *c > 0 {
                    let _ = writeln!(
                        out,
                        "{t},{},{},{c}",
                        i / self.num_actions,
                        i % self.num_actions
                    );
                }
            }
        }
        out
    }

    /// Graphviz digraph: node `s{t}_a{i}` is action `i` at move `t`, edge
    /// weights are pair counts.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
        for t in 0..=self.counts.len() {
            let _ = writeln!(out, "  subgraph cluster_{t} {{ label=\"move {}\";", t + 1);
            for a in 0..self.num_actions {
                let _ = writeln!(out, "    s{t}_a{a} [label=\"{a}\"];");
            }
            out.push_str("  }\n");
        }
        let max = self
            .counts
            .iter()
            .flat_map(|m| m.iter())
            .copied()
            .max()
            .unwrap_or(0)
            .max(1) as f64;
        for (t, m) in self.counts.iter().enumerate() {
            for (i, c) in m.iter().enumerate() {
                if *c > 0 {
                    let _ = writeln!(
                        out,
                        "  s{t}_a{} -> s{}_a{} [weight={c}, penwidth={:.3}];",
                        i / self.num_actions,
                        t + 1,
                        i % self.num_actions,
                        0.5 + 5.0 * *c as f64 / max
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Consecutive-action counts of greedy episodes from every start of
/// `dataset`, summed over seeds.
pub fn transition_stats(
    models: &[(u64, &Model)],
    dataset: &TrackDataset,
    config: EpisodeConfig,
    policy: Policy,
) -> Result<TransitionStats> {
    let num_actions = models
        .first()
        .map(|(_, m)| m.params.spec().num_actions)
        .ok_or(Error::Empty("models"))?;
    let mut stats = TransitionStats::new(num_actions, config.moves_per_sequence);
    for (seed, model) in models {
        let outcomes = play_all(model, dataset, config, policy, *seed)?;
        stats.merge(&TransitionStats::from_outcomes(
            &outcomes,
            num_actions,
            config.moves_per_sequence,
        )?)?;
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_episode_one_count_per_step() {
        let mut s = TransitionStats::new(3, 4);
        s.add(&[0, 2, 2, 1]).unwrap();
        assert_eq!(s.step_totals(), vec![1, 1, 1]);
        assert_eq!(s.counts[0][2], 1);
        assert_eq!(s.counts[1][2 * 3 + 2], 1);
        assert!(s.add(&[0, 1]).is_err());
        assert_eq!(s.max_pair_share(), 1.0);
    }

    #[test]
    fn merge_conserves_totals() {
        let mut a = TransitionStats::new(2, 3);
        a.add(&[0, 1, 0]).unwrap();
        let mut b = TransitionStats::new(2, 3);
        b.add(&[1, 1, 1]).unwrap();
        b.add(&[0, 0, 1]).unwrap();
        a.merge(&b).unwrap();
        assert_eq!(a.episodes, 3);
        assert_eq!(a.step_totals(), vec![3, 3]);
    }

    #[test]
    fn csv_and_dot_list_edges() {
        let mut s = TransitionStats::new(2, 2);
        s.add(&[1, 0]).unwrap();
        assert_eq!(s.to_csv(), "step,from,to,count\n0,1,0,1\n");
        let dot = s.to_dot("test");
        assert!(dot.contains("s0_a1 -> s1_a0 [weight=1"));
        assert!(dot.starts_with("digraph \"test\""));
    }
}
