//! Agent state: accumulated per-(object, action) log posteriors.
//!
//! The posterior block is stored action-major, `log_posterior[a * C + o]`,
//! so each action column is contiguous. Every fuse renormalizes the touched
//! column in log space and clamps entries at [`LOG_FLOOR`], so exponentiating
//! a column always gives a distribution over objects.

use serde::{Deserialize, Serialize};

use super::dirichlet::DirichletTable;
use super::vector::{argmax, BeliefVector};
use crate::error::{Error, Result};

/// Smallest log-probability kept in the state.
pub const LOG_FLOOR: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncoderKind {
    NaiveBayes,
    Dirichlet,
}

impl EncoderKind {
    pub fn name(self) -> &'static str {
        match self {
            EncoderKind::NaiveBayes => "naive_bayes",
            EncoderKind::Dirichlet => "dirichlet",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedState {
    kind: EncoderKind,
    num_classes: usize,
    num_actions: usize,
    log_posterior: Vec<f64>,
    used_actions: Vec<bool>,
}

impl EncodedState {
    /// Uniform posterior in every column.
    pub fn new(kind: EncoderKind, num_classes: usize, num_actions: usize) -> Self {
        let uniform = -(num_classes as f64).ln();
        Self {
            kind,
            num_classes,
            num_actions,
            log_posterior: vec![uniform; num_classes * num_actions],
            used_actions: vec![false; num_actions],
        }
    }

    pub fn kind(&self) -> EncoderKind {
        self.kind
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    /// Width of [`Self::encode`]'s posterior block, `C * H`.
    pub fn block_len(&self) -> usize {
        self.num_classes * self.num_actions
    }

    pub fn log_posterior(&self) -> &[f64] {
        &self.log_posterior
    }

    pub fn log_column(&self, action: usize) -> &[f64] {
        let c = self.num_classes;
        &self.log_posterior[action * c..(action + 1) * c]
    }

    pub fn column(&self, action: usize) -> Vec<f64> {
        self.log_column(action).iter().map(|l| l.exp()).collect()
    }

    /// Actions fused so far with [`Self::dirichlet_fuse`].
    pub fn used_actions(&self) -> impl Iterator<Item = usize> + '_ {
        self.used_actions
            .iter()
            .enumerate()
            .filter_map(|(a, used)| used.then_some(a))
    }

    fn check_belief(&self, b: &BeliefVector) -> Result<()> {
        if b.len() != self.num_classes {
            return Err(Error::Dimension {
                what: "belief",
                expected: self.num_classes,
                actual: b.len(),
            });
        }
        Ok(())
    }

    fn renormalize(&mut self, action: usize) {
        let c = self.num_classes;
        let col = &mut self.log_posterior[action * c..(action + 1) * c];
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + col.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
        for l in col.iter_mut() {
            *l = (*l - lse).max(LOG_FLOOR);
        }
    }

    /// Naive Bayes product fusion under a uniform prior: adds `ln b` to the
    /// single NB column and renormalizes.
    pub fn nb_fuse(&mut self, b: &BeliefVector) -> Result<()> {
        if self.kind != EncoderKind::NaiveBayes {
            return Err(Error::EncoderMismatch {
                expected: EncoderKind::NaiveBayes.name(),
                actual: self.kind.name(),
            });
        }
        self.check_belief(b)?;
        for (l, lb) in self.log_posterior[..self.num_classes]
            .iter_mut()
            .zip(b.clamped_logs())
        {
            *l += lb;
        }
        self.renormalize(0);
        Ok(())
    }

    /// Adds `ln Dir(b; α^o_action)` to column `action` for every object `o`;
    /// other columns are left untouched.
    pub fn dirichlet_fuse(
        &mut self,
        b: &BeliefVector,
        action: usize,
        table: &DirichletTable,
    ) -> Result<()> {
        if self.kind != EncoderKind::Dirichlet {
            return Err(Error::EncoderMismatch {
                expected: EncoderKind::Dirichlet.name(),
                actual: self.kind.name(),
            });
        }
        if action >= self.num_actions {
            return Err(Error::OutOfRange {
                what: "action",
                index: action,
                limit: self.num_actions,
            });
        }
        self.check_belief(b)?;
        if table.num_classes() != self.num_classes || table.num_actions() != self.num_actions {
            return Err(Error::Dimension {
                what: "Dirichlet table cells",
                expected: self.block_len(),
                actual: table.num_classes() * table.num_actions(),
            });
        }
        let c = self.num_classes;
        for o in 0..c {
            let ld = table.log_density(o, action, b)?;
            self.log_posterior[action * c + o] += ld;
        }
        self.renormalize(action);
        self.used_actions[action] = true;
        Ok(())
    }

    /// Fuses the first image of an episode, which no action produced.
    ///
    /// Naive Bayes fuses it as usual. The Dirichlet encoder scores it under
    /// every action column without marking any action as used.
    pub fn fuse_initial(&mut self, b: &BeliefVector, table: Option<&DirichletTable>) -> Result<()> {
        match self.kind {
            EncoderKind::NaiveBayes => self.nb_fuse(b),
            EncoderKind::Dirichlet => {
                let table = table.ok_or_else(|| {
                    Error::InvalidParameter("Dirichlet encoder needs a table".into())
                })?;
                for a in 0..self.num_actions {
                    self.dirichlet_fuse(b, a, table)?;
                }
                self.used_actions.iter_mut().for_each(|u| *u = false);
                Ok(())
            }
        }
    }

    /// Fuses the belief observed after taking `action`.
    pub fn fuse(
        &mut self,
        b: &BeliefVector,
        action: usize,
        table: Option<&DirichletTable>,
    ) -> Result<()> {
        match self.kind {
            EncoderKind::NaiveBayes => self.nb_fuse(b),
            EncoderKind::Dirichlet => {
                let table = table.ok_or_else(|| {
                    Error::InvalidParameter("Dirichlet encoder needs a table".into())
                })?;
                self.dirichlet_fuse(b, action, table)
            }
        }
    }

    /// The `C * H` block presented to the action head. Naive Bayes places
    /// its fused belief in the first `C` slots and zero-pads the rest.
    pub fn posterior_block(&self) -> Vec<f64> {
        match self.kind {
            EncoderKind::Dirichlet => self.log_posterior.iter().map(|l| l.exp()).collect(),
            EncoderKind::NaiveBayes => {
                let mut block = vec![0.0; self.block_len()];
                for (dst, l) in block
                    .iter_mut()
                    .zip(&self.log_posterior[..self.num_classes])
                {
                    *dst = l.exp();
                }
                block
            }
        }
    }

    /// Posterior block followed by `latest`; length `C * H + latest.len()`.
    pub fn encode(&self, latest: &[f64]) -> Vec<f64> {
        let mut out = self.posterior_block();
        out.extend_from_slice(latest);
        out
    }

    /// Object posterior used for label readout.
    ///
    /// Naive Bayes: the fused belief. Dirichlet: mean of the columns of the
    /// actions taken so far (all columns before any action), renormalized.
    pub fn label_posterior(&self) -> BeliefVector {
        let c = self.num_classes;
        let mut acc = vec![0.0; c];
        match self.kind {
            EncoderKind::NaiveBayes => {
                for (dst, l) in acc.iter_mut().zip(self.log_column(0)) {
                    *dst = l.exp();
                }
            }
            EncoderKind::Dirichlet => {
                let used: Vec<usize> = self.used_actions().collect();
                let columns: Vec<usize> = if used.is_empty() {
                    (0..self.num_actions).collect()
                } else {
                    used
                };
                for a in columns {
                    for (dst, l) in acc.iter_mut().zip(self.log_column(a)) {
                        *dst += l.exp();
                    }
                }
            }
        }
        BeliefVector::from_weights(acc).unwrap_or_else(|_| BeliefVector::uniform(c))
    }

    /// Argmax of [`Self::label_posterior`], ties to the lowest class.
    pub fn predicted_label(&self) -> usize {
        argmax(self.label_posterior().as_slice())
    }
}
