//! Dirichlet densities over belief vectors and the per-(object, action)
//! parameter table fitted by gradient ascent on the log-likelihood.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::special::{digamma_unchecked, ln_gamma_unchecked};
use super::vector::BeliefVector;
use crate::error::{Error, Result};

/// Bounds on log α kept by [`DirichletTable::fit_step`].
const LOG_ALPHA_MIN: f64 = -13.815_510_557_964_274; // ln 1e-6
const LOG_ALPHA_MAX: f64 = 13.815_510_557_964_274; // ln 1e6

fn check_alpha(alpha: &[f64]) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::Empty("alpha"));
    }
    if alpha.iter().any(|a| !a.is_finite() || *a <= 0.0) {
        return Err(Error::InvalidParameter(
            "Dirichlet parameters must be finite and strictly positive".into(),
        ));
    }
    Ok(())
}

fn check_dim(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::Dimension {
            what,
            expected,
            actual,
        });
    }
    Ok(())
}

/// ln Γ(Σα) − Σ ln Γ(α_k), the log normalizer of Dir(·; α).
fn log_normalizer(alpha: &[f64]) -> f64 {
    let total: f64 = alpha.iter().sum();
    ln_gamma_unchecked(total) - alpha.iter().map(|a| ln_gamma_unchecked(*a)).sum::<f64>()
}

fn log_density_unchecked(b: &BeliefVector, alpha: &[f64]) -> f64 {
    let data: f64 = alpha
        .iter()
        .zip(b.clamped_logs())
        .map(|(a, lb)| (a - 1.0) * lb)
        .sum();
    log_normalizer(alpha) + data
}

/// log Dir(b; α). Belief entries are clamped to `[1e-8, 1]` before the logs.
pub fn dirichlet_log_density(b: &BeliefVector, alpha: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    check_dim("belief vs alpha", alpha.len(), b.len())?;
    Ok(log_density_unchecked(b, alpha))
}

/// Σ_i log Dir(B_i; α).
pub fn batch_log_likelihood(samples: &[BeliefVector], alpha: &[f64]) -> Result<f64> {
    check_alpha(alpha)?;
    let norm = log_normalizer(alpha);
    let mut total = 0.0;
    for b in samples {
        check_dim("belief vs alpha", alpha.len(), b.len())?;
        total += norm
            + alpha
                .iter()
                .zip(b.clamped_logs())
                .map(|(a, lb)| (a - 1.0) * lb)
                .sum::<f64>();
    }
    Ok(total)
}

/// Gradient of Σ_i log Dir(B_i; α) with respect to α:
/// `N ψ(Σα) − N ψ(α_k) + Σ_i ln B_ik`.
pub fn dirichlet_grad_loglik(samples: &[BeliefVector], alpha: &[f64]) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if samples.is_empty() {
        return Err(Error::Empty("sample batch"));
    }
    let n = samples.len() as f64;
    let psi_total = digamma_unchecked(alpha.iter().sum());
    let mut grad: Vec<f64> = alpha
        .iter()
        .map(|a| n * psi_total - n * digamma_unchecked(*a))
        .collect();
    for b in samples {
        check_dim("belief vs alpha", alpha.len(), b.len())?;
        for (g, lb) in grad.iter_mut().zip(b.clamped_logs()) {
            *g += lb;
        }
    }
    Ok(grad)
}

/// One Dirichlet per (object, action) pair, each over the `C`-simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableDoc", into = "TableDoc")]
pub struct DirichletTable {
    num_classes: usize,
    num_actions: usize,
    // [(object * H + action) * C + k]
    alphas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    num_classes: usize,
    num_actions: usize,
    alphas: Vec<Vec<Vec<f64>>>,
}

impl From<DirichletTable> for TableDoc {
    fn from(t: DirichletTable) -> Self {
        let alphas = (0..t.num_classes)
            .map(|o| (0..t.num_actions).map(|a| t.alpha(o, a).to_vec()).collect())
            .collect();
        TableDoc {
            num_classes: t.num_classes,
            num_actions: t.num_actions,
            alphas,
        }
    }
}

impl TryFrom<TableDoc> for DirichletTable {
    type Error = Error;

    fn try_from(doc: TableDoc) -> Result<Self> {
        DirichletTable::from_nested(doc.num_classes, doc.num_actions, doc.alphas)
    }
}

impl DirichletTable {
    /// Every parameter set to 1, the flat Dirichlet.
    pub fn uniform(num_classes: usize, num_actions: usize) -> Result<Self> {
        if num_classes < 2 || num_actions == 0 {
            return Err(Error::InvalidParameter(format!(
                "table needs C >= 2 and H >= 1, got C={num_classes} H={num_actions}"
            )));
        }
        Ok(Self {
            num_classes,
            num_actions,
            alphas: vec![1.0; num_classes * num_actions * num_classes],
        })
    }

    /// Builds from `alphas[object][action][k]`.
    pub fn from_nested(
        num_classes: usize,
        num_actions: usize,
        nested: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let mut table = Self::uniform(num_classes, num_actions)?;
        check_dim("alpha objects", num_classes, nested.len())?;
        for (o, per_action) in nested.into_iter().enumerate() {
            check_dim("alpha actions", num_actions, per_action.len())?;
            for (a, alpha) in per_action.into_iter().enumerate() {
                table.set_alpha(o, a, &alpha)?;
            }
        }
        Ok(table)
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn offset(&self, object: usize, action: usize) -> usize {
        (object * self.num_actions + action) * self.num_classes
    }

    fn check_cell(&self, object: usize, action: usize) -> Result<()> {
        if object >= self.num_classes {
            return Err(Error::OutOfRange {
                what: "object",
                index: object,
                limit: self.num_classes,
            });
        }
        if action >= self.num_actions {
            return Err(Error::OutOfRange {
                what: "action",
                index: action,
                limit: self.num_actions,
            });
        }
        Ok(())
    }

    /// Parameters of Dir(·; α^object_action). Panics on out-of-range indices.
    pub fn alpha(&self, object: usize, action: usize) -> &[f64] {
        let start = self.offset(object, action);
        &self.alphas[start..start + self.num_classes]
    }

    pub fn set_alpha(&mut self, object: usize, action: usize, alpha: &[f64]) -> Result<()> {
        self.check_cell(object, action)?;
        check_dim("alpha", self.num_classes, alpha.len())?;
        check_alpha(alpha)?;
        let start = self.offset(object, action);
        self.alphas[start..start + self.num_classes].copy_from_slice(alpha);
        Ok(())
    }

    pub fn log_density(&self, object: usize, action: usize, b: &BeliefVector) -> Result<f64> {
        self.check_cell(object, action)?;
        check_dim("belief", self.num_classes, b.len())?;
        Ok(log_density_unchecked(b, self.alpha(object, action)))
    }

    /// One gradient-ascent step on `log P(batch | α^object_action)` taken in
    /// θ = ln α, i.e. `θ_k += lr · α_k · ∂L/∂α_k`. Only that cell changes.
    pub fn fit_step(
        &mut self,
        object: usize,
        action: usize,
        batch: &[BeliefVector],
        lr: f64,
    ) -> Result<()> {
        self.check_cell(object, action)?;
        if !lr.is_finite() || lr < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be finite and non-negative, got {lr}"
            )));
        }
        let grad = dirichlet_grad_loglik(batch, self.alpha(object, action))?;
        let start = self.offset(object, action);
        for (alpha, g) in self.alphas[start..start + self.num_classes]
            .iter_mut()
            .zip(grad)
        {
            let step = lr * *alpha * g;
            if !step.is_finite() {
                return Err(Error::NonFinite(format!(
                    "Dirichlet step for object {object}, action {action}"
                )));
            }
            let log_alpha = alpha.ln();
            let clamped = (log_alpha + step).clamp(LOG_ALPHA_MIN, LOG_ALPHA_MAX);
            // α·exp(Δ) keeps a zero step bit-exact.
            *alpha *= (clamped - log_alpha).exp();
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
