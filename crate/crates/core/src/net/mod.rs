//! Two-branch feedforward network.
//!
//! The classifier branch maps an observation to a penultimate feature
//! vector and a softmax belief over classes. The action branch maps the
//! encoded state (posterior block followed by the latest features, or the
//! latest belief) to one linear Q value per action. Gradients are written
//! out by hand; the action branch's gradient reaches the classifier only
//! through the latest block, never through the posterior block.

mod dense;

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use dense::Dense;

use crate::belief::{BeliefVector, EncodedState, BELIEF_FLOOR};
use crate::error::{Error, Result};

/// What follows the posterior block in the action-branch input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatestBlock {
    /// Penultimate classifier activations (width `feature_dim`).
    #[default]
    Features,
    /// Softmax belief of the latest image (width `num_classes`).
    Belief,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub input_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub feature_dim: usize,
    pub num_classes: usize,
    pub num_actions: usize,
    pub q_hidden_dims: Vec<usize>,
    #[serde(default)]
    pub latest_block: LatestBlock,
    /// Dropout probability on the classifier's ReLU layers; 0 disables it.
    #[serde(default)]
    pub dropout: f64,
}

impl NetworkSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = self.input_dim > 0
            && self.feature_dim > 0
            && self.num_actions > 0
            && self.hidden_dims.iter().all(|d| *d > 0)
            && self.q_hidden_dims.iter().all(|d| *d > 0);
        if !positive {
            return Err(Error::InvalidConfig(
                "network widths must all be positive".into(),
            ));
        }
        if self.num_classes < 2 {
            return Err(Error::InvalidConfig("need at least two classes".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::InvalidConfig(format!(
                "dropout must lie in [0, 1), got {}",
                self.dropout
            )));
        }
        Ok(())
    }

    pub fn latest_width(&self) -> usize {
        match self.latest_block {
            LatestBlock::Features => self.feature_dim,
            LatestBlock::Belief => self.num_classes,
        }
    }

    /// `C * H + latest_width`, the width of [`EncodedState::encode`].
    pub fn q_input_dim(&self) -> usize {
        self.num_classes * self.num_actions + self.latest_width()
    }

    fn classifier_widths(&self) -> Vec<usize> {
        let mut w = vec![self.input_dim];
        w.extend(&self.hidden_dims);
        w.push(self.feature_dim);
        w.push(self.num_classes);
        w
    }

    fn q_widths(&self) -> Vec<usize> {
        let mut w = vec![self.q_input_dim()];
        w.extend(&self.q_hidden_dims);
        w.push(self.num_actions);
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardResult {
    pub belief: BeliefVector,
    pub features: Vec<f64>,
    pub qvalues: Vec<f64>,
}

/// One training example: the image seen at the decision, the posterior
/// block at that time, the true label, the action taken and its TD target.
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub observation: &'a [f64],
    pub state_block: &'a [f64],
    pub label: usize,
    pub action: usize,
    pub target_q: f64,
}

/// Which cost terms contribute to a gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostTerms {
    pub classification: bool,
    pub td: bool,
}

impl CostTerms {
    pub const TOTAL: CostTerms = CostTerms {
        classification: true,
        td: true,
    };
    pub const CLASSIFICATION: CostTerms = CostTerms {
        classification: true,
        td: false,
    };
    pub const TD: CostTerms = CostTerms {
        classification: false,
        td: true,
    };
}

/// Batch means of the two cost terms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Costs {
    pub classification: f64,
    pub td: f64,
}

impl Costs {
    pub fn total(&self) -> f64 {
        self.classification + self.td
    }

    pub fn select(&self, terms: CostTerms) -> f64 {
        let mut c = 0.0;
        if terms.classification {
            c += self.classification;
        }
        if terms.td {
            c += self.td;
        }
        c
    }
}

/// `−ln max(belief[label], 1e-8)`.
pub fn cross_entropy(belief: &BeliefVector, label: usize) -> f64 {
    -belief.as_slice()[label].max(BELIEF_FLOOR).ln()
}

/// `(target − predicted)²`; the target is treated as a constant.
pub fn td_cost(predicted_q: f64, target_q: f64) -> f64 {
    let e = target_q - predicted_q;
    e * e
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    spec: NetworkSpec,
    classifier: Vec<Dense>,
    q_head: Vec<Dense>,
}

/// Per-parameter gradients, shaped like [`NetworkParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub classifier: Vec<Dense>,
    pub q_head: Vec<Dense>,
}

impl Gradients {
    pub fn flat(&self) -> Vec<f64> {
        self.classifier
            .iter()
            .chain(&self.q_head)
            .flat_map(|l| l.params().copied())
            .collect()
    }

    fn is_finite(&self) -> bool {
        self.classifier
            .iter()
            .chain(&self.q_head)
            .all(Dense::is_finite)
    }
}

struct Trace {
    // inputs[l] is the input to layer l
    inputs: Vec<Vec<f64>>,
    // derivative of the activation (ReLU and dropout scale) for hidden layers
    gates: Vec<Vec<f64>>,
    output: Vec<f64>,
}

fn run_layers<R: Rng + ?Sized>(
    layers: &[Dense],
    x: &[f64],
    dropout: f64,
    rng: Option<&mut R>,
) -> Trace {
    let mut rng = rng;
    let mut inputs = Vec::with_capacity(layers.len());
    let mut gates = Vec::with_capacity(layers.len().saturating_sub(1));
    let mut current = x.to_vec();
    let last = layers.len() - 1;
    for (l, layer) in layers.iter().enumerate() {
        let z = layer.forward(&current);
        inputs.push(current);
        if l == last {
            return Trace {
                inputs,
                gates,
                output: z,
            };
        }
        let keep_scale = 1.0 / (1.0 - dropout);
        let mut gate = Vec::with_capacity(z.len());
        let mut act = Vec::with_capacity(z.len());
        for v in z {
            let mut g = if v > 0.0 { 1.0 } else { 0.0 };
            if dropout > 0.0 {
                if let Some(r) = rng.as_deref_mut() {
                    g *= if r.random::<f64>() < dropout {
                        0.0
                    } else {
                        keep_scale
                    };
                }
            }
            gate.push(g);
            act.push(v * g);
        }
        gates.push(gate);
        current = act;
    }
    unreachable!("layer stacks are never empty")
}

/// Backpropagates `delta` (gradient at the stack output) and returns the
/// gradient at the stack input.
fn backprop_layers(
    layers: &[Dense],
    trace: &Trace,
    mut delta: Vec<f64>,
    grads: &mut [Dense],
) -> Vec<f64> {
    for l in (0..layers.len()).rev() {
        let dx = layers[l].backward(&trace.inputs[l], &delta, &mut grads[l]);
        delta = if l > 0 {
            dx.iter()
                .zip(&trace.gates[l - 1])
                .map(|(d, g)| d * g)
                .collect()
        } else {
            dx
        };
    }
    delta
}

impl NetworkParams {
    /// Glorot-uniform initialization from `seed`.
    pub fn init(spec: NetworkSpec, seed: u64) -> Result<Self> {
        spec.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let build = |w: Vec<usize>, rng: &mut ChaCha8Rng| -> Vec<Dense> {
            w.windows(2)
                .map(|p| Dense::glorot(p[0], p[1], rng))
                .collect()
        };
        let classifier = build(spec.classifier_widths(), &mut rng);
        let q_head = build(spec.q_widths(), &mut rng);
        Ok(Self {
            spec,
            classifier,
            q_head,
        })
    }

    pub fn zeros(spec: NetworkSpec) -> Result<Self> {
        spec.validate()?;
        let build = |w: Vec<usize>| -> Vec<Dense> {
            w.windows(2).map(|p| Dense::zeros(p[0], p[1])).collect()
        };
        Ok(Self {
            classifier: build(spec.classifier_widths()),
            q_head: build(spec.q_widths()),
            spec,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn param_count(&self) -> usize {
        self.classifier
            .iter()
            .chain(&self.q_head)
            .map(Dense::param_count)
            .sum()
    }

    pub fn flat(&self) -> Vec<f64> {
        self.classifier
            .iter()
            .chain(&self.q_head)
            .flat_map(|l| l.params().copied())
            .collect()
    }

    pub fn set_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.param_count() {
            return Err(Error::Dimension {
                what: "flat parameters",
                expected: self.param_count(),
                actual: values.len(),
            });
        }
        for (dst, v) in self
            .classifier
            .iter_mut()
            .chain(self.q_head.iter_mut())
            .flat_map(|l| l.params_mut())
            .zip(values)
        {
            *dst = *v;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.classifier
            .iter()
            .chain(&self.q_head)
            .all(Dense::is_finite)
    }

    fn check_observation(&self, obs: &[f64]) -> Result<()> {
        if obs.len() != self.spec.input_dim {
            return Err(Error::Dimension {
                what: "observation",
                expected: self.spec.input_dim,
                actual: obs.len(),
            });
        }
        Ok(())
    }

    /// Classifier branch: `(belief, penultimate features)`.
    pub fn classify(&self, observation: &[f64]) -> Result<(BeliefVector, Vec<f64>)> {
        self.check_observation(observation)?;
        let trace = run_layers::<ChaCha8Rng>(&self.classifier, observation, 0.0, None);
        let features = trace.inputs.last().cloned().unwrap_or_default();
        Ok((BeliefVector::softmax(&trace.output), features))
    }

    /// Picks the latest block fed to the action branch.
    pub fn latest_block(&self, belief: &BeliefVector, features: &[f64]) -> Vec<f64> {
        match self.spec.latest_block {
            LatestBlock::Features => features.to_vec(),
            LatestBlock::Belief => belief.as_slice().to_vec(),
        }
    }

    /// Action branch on an already encoded state.
    pub fn q_values(&self, encoded: &[f64]) -> Result<Vec<f64>> {
        if encoded.len() != self.spec.q_input_dim() {
            return Err(Error::Dimension {
                what: "encoded state",
                expected: self.spec.q_input_dim(),
                actual: encoded.len(),
            });
        }
        Ok(run_layers::<ChaCha8Rng>(&self.q_head, encoded, 0.0, None).output)
    }

    /// Classifies the observation and evaluates Q on `state` encoded with
    /// this observation's latest block. The state is used as given.
    pub fn forward(&self, observation: &[f64], state: &EncodedState) -> Result<ForwardResult> {
        if state.num_classes() != self.spec.num_classes
            || state.num_actions() != self.spec.num_actions
        {
            return Err(Error::Dimension {
                what: "state block",
                expected: self.spec.num_classes * self.spec.num_actions,
                actual: state.block_len(),
            });
        }
        let (belief, features) = self.classify(observation)?;
        let encoded = state.encode(&self.latest_block(&belief, &features));
        let qvalues = self.q_values(&encoded)?;
        Ok(ForwardResult {
            belief,
            features,
            qvalues,
        })
    }

    fn check_sample(&self, s: &Sample<'_>) -> Result<()> {
        self.check_observation(s.observation)?;
        let block = self.spec.num_classes * self.spec.num_actions;
        if s.state_block.len() != block {
            return Err(Error::Dimension {
                what: "state block",
                expected: block,
                actual: s.state_block.len(),
            });
        }
        if s.label >= self.spec.num_classes {
            return Err(Error::OutOfRange {
                what: "label",
                index: s.label,
                limit: self.spec.num_classes,
            });
        }
        if s.action >= self.spec.num_actions {
            return Err(Error::OutOfRange {
                what: "action",
                index: s.action,
                limit: self.spec.num_actions,
            });
        }
        Ok(())
    }

    /// Batch-mean costs without dropout.
    pub fn costs(&self, batch: &[Sample<'_>]) -> Result<Costs> {
        if batch.is_empty() {
            return Err(Error::Empty("training batch"));
        }
        let n = batch.len() as f64;
        let mut costs = Costs::default();
        for s in batch {
            self.check_sample(s)?;
            let (belief, features) = self.classify(s.observation)?;
            let mut q_in = s.state_block.to_vec();
            q_in.extend(self.latest_block(&belief, &features));
            let q = self.q_values(&q_in)?;
            costs.classification += cross_entropy(&belief, s.label) / n;
            costs.td += td_cost(q[s.action], s.target_q) / n;
        }
        Ok(costs)
    }

    /// Gradient of the selected batch-mean cost terms. Dropout masks are drawn
    /// from `rng` when the spec enables dropout.
    pub fn gradients<R: Rng + ?Sized>(
        &self,
        batch: &[Sample<'_>],
        terms: CostTerms,
        mut rng: Option<&mut R>,
    ) -> Result<(Gradients, Costs)> {
        if batch.is_empty() {
            return Err(Error::Empty("training batch"));
        }
        let n = batch.len() as f64;
        let mut grads = Gradients {
            classifier: self
                .classifier
                .iter()
                .map(|l| Dense::zeros(l.inputs, l.outputs))
                .collect(),
            q_head: self
                .q_head
                .iter()
                .map(|l| Dense::zeros(l.inputs, l.outputs))
                .collect(),
        };
        let mut costs = Costs::default();
        let block = self.spec.num_classes * self.spec.num_actions;
        for s in batch {
            self.check_sample(s)?;
            let ctrace = run_layers(
                &self.classifier,
                s.observation,
                self.spec.dropout,
                rng.as_deref_mut(),
            );
            let belief = BeliefVector::softmax(&ctrace.output);
            let features = ctrace.inputs.last().expect("classifier has layers").clone();
            let mut q_in = s.state_block.to_vec();
            q_in.extend(self.latest_block(&belief, &features));
            let qtrace = run_layers::<R>(&self.q_head, &q_in, 0.0, None);
            let q = &qtrace.output;

            costs.classification += cross_entropy(&belief, s.label) / n;
            costs.td += td_cost(q[s.action], s.target_q) / n;

            // Action branch: only the taken action carries TD error.
            let mut d_latest = vec![0.0; self.spec.latest_width()];
            if terms.td {
                let mut dq = vec![0.0; self.spec.num_actions];
                dq[s.action] = 2.0 * (q[s.action] - s.target_q) / n;
                let d_in = backprop_layers(&self.q_head, &qtrace, dq, &mut grads.q_head);
                // The posterior block is a constant input; only the tail flows back.
                d_latest.copy_from_slice(&d_in[block..]);
            }

            let b = belief.as_slice();
            let mut d_logits = vec![0.0; self.spec.num_classes];
            if terms.classification {
                for (k, d) in d_logits.iter_mut().enumerate() {
                    let target = if k == s.label { 1.0 } else { 0.0 };
                    *d += (b[k] - target) / n;
                }
            }
            let last = self.classifier.len() - 1;
            if self.spec.latest_block == LatestBlock::Belief {
                // Softmax Jacobian: (Jᵀg)_k = b_k (g_k − Σ_j b_j g_j).
                let dot: f64 = b.iter().zip(&d_latest).map(|(p, g)| p * g).sum();
                for k in 0..b.len() {
                    d_logits[k] += b[k] * (d_latest[k] - dot);
                }
            }
            let mut d_features = self.classifier[last].backward(
                &ctrace.inputs[last],
                &d_logits,
                &mut grads.classifier[last],
            );
            if self.spec.latest_block == LatestBlock::Features {
                for (d, g) in d_features.iter_mut().zip(&d_latest) {
                    *d += g;
                }
            }
            let gated: Vec<f64> = d_features
                .iter()
                .zip(&ctrace.gates[last - 1])
                .map(|(d, g)| d * g)
                .collect();
            let lower = Trace {
                inputs: ctrace.inputs[..last].to_vec(),
                gates: ctrace.gates[..last - 1].to_vec(),
                output: Vec::new(),
            };
            backprop_layers(
                &self.classifier[..last],
                &lower,
                gated,
                &mut grads.classifier[..last],
            );
        }
        Ok((grads, costs))
    }

    /// One SGD step on the joint cost. The classifier branch follows the
    /// gradient of classification + TD cost, the action branch that of the
    /// TD cost alone (the classification cost does not depend on it).
    ///
    /// Returns the batch costs measured before the update. Nothing is changed
    /// if any gradient or cost is non-finite.
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        batch: &[Sample<'_>],
        lr: f64,
        rng: &mut R,
    ) -> Result<Costs> {
        if !lr.is_finite() || lr < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be finite and non-negative, got {lr}"
            )));
        }
        let (grads, costs) = self.gradients(batch, CostTerms::TOTAL, Some(rng))?;
        if !grads.is_finite() || !costs.total().is_finite() {
            return Err(Error::NonFinite("gradient or cost in train_step".into()));
        }
        for (layer, grad) in self
            .classifier
            .iter_mut()
            .chain(self.q_head.iter_mut())
            .zip(grads.classifier.iter().chain(&grads.q_head))
        {
            for (w, g) in layer.params_mut().zip(grad.params()) {
                *w -= lr * g;
            }
        }
        if !self.is_finite() {
            return Err(Error::NonFinite("parameters after train_step".into()));
        }
        Ok(costs)
    }

    fn validate_shapes(&self) -> Result<()> {
        self.spec.validate()?;
        let check = |layers: &[Dense], widths: Vec<usize>, what: &'static str| -> Result<()> {
            if layers.len() + 1 != widths.len() {
                return Err(Error::Dimension {
                    what,
                    expected: widths.len() - 1,
                    actual: layers.len(),
                });
            }
            for (l, w) in layers.iter().zip(widths.windows(2)) {
                if l.inputs != w[0]
                    || l.outputs != w[1]
                    || l.weights.len() != w[0] * w[1]
                    || l.bias.len() != w[1]
                {
                    return Err(Error::Dimension {
                        what,
                        expected: w[0] * w[1],
                        actual: l.weights.len(),
                    });
                }
            }
            Ok(())
        };
        check(
            &self.classifier,
            self.spec.classifier_widths(),
            "classifier layers",
        )?;
        check(&self.q_head, self.spec.q_widths(), "action layers")?;
        if !self.is_finite() {
            return Err(Error::NonFinite("checkpoint parameters".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let params: Self = serde_json::from_str(text)?;
        params.validate_shapes()?;
        Ok(params)
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::EncoderKind;

    fn toy_spec() -> NetworkSpec {
        NetworkSpec {
            input_dim: 3,
            hidden_dims: vec![5],
            feature_dim: 4,
            num_classes: 4,
            num_actions: 2,
            q_hidden_dims: vec![6],
            latest_block: LatestBlock::Features,
            dropout: 0.0,
        }
    }

    #[test]
    fn zero_network_is_uniform_with_zero_q() {
        let params = NetworkParams::zeros(toy_spec()).unwrap();
        let state = EncodedState::new(EncoderKind::Dirichlet, 4, 2);
        let out = params.forward(&[0.3, -1.0, 2.0], &state).unwrap();
        for p in out.belief.as_slice() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        assert_eq!(out.qvalues, vec![0.0, 0.0]);
    }

    #[test]
    fn forward_is_deterministic() {
        let params = NetworkParams::init(toy_spec(), 4).unwrap();
        let state = EncodedState::new(EncoderKind::NaiveBayes, 4, 2);
        let a = params.forward(&[0.1, 0.2, 0.3], &state).unwrap();
        let b = params.forward(&[0.1, 0.2, 0.3], &state).unwrap();
        assert_eq!(a, b);
        let sum: f64 = a.belief.as_slice().iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn forward_rejects_bad_dimensions() {
        let params = NetworkParams::init(toy_spec(), 4).unwrap();
        let state = EncodedState::new(EncoderKind::NaiveBayes, 4, 2);
        assert!(matches!(
            params.forward(&[0.1, 0.2], &state),
            Err(Error::Dimension { .. })
        ));
        let wrong = EncodedState::new(EncoderKind::NaiveBayes, 3, 2);
        assert!(params.forward(&[0.1, 0.2, 0.3], &wrong).is_err());
    }

    #[test]
    fn cost_examples() {
        let one_hot = BeliefVector::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert!(cross_entropy(&one_hot, 1).abs() < 1e-12);
        let uniform = BeliefVector::uniform(136);
        assert!((cross_entropy(&uniform, 7) - 4.912_655).abs() < 1e-6);
        let quarter = BeliefVector::new(vec![0.25, 0.75]).unwrap();
        assert!((cross_entropy(&quarter, 0) - 1.386_294).abs() < 1e-6);
        assert_eq!(td_cost(0.7, 0.7), 0.0);
        assert!((td_cost(0.5, 1.45) - 0.9025).abs() < 1e-12);
        assert_eq!(td_cost(0.0, 1.0), td_cost(1.0, 0.0));
    }

    #[test]
    fn untaken_actions_get_no_output_gradient() {
        let params = NetworkParams::init(toy_spec(), 8).unwrap();
        let obs = [0.4, -0.2, 0.9];
        let block = [0.25; 8];
        let batch = [Sample {
            observation: &obs,
            state_block: &block,
            label: 2,
            action: 1,
            target_q: 3.0,
        }];
        let (g, _) = params
            .gradients::<ChaCha8Rng>(&batch, CostTerms::TD, None)
            .unwrap();
        let out = g.q_head.last().unwrap();
        let row0 = &out.weights[..out.inputs];
        assert!(row0.iter().all(|w| *w == 0.0));
        assert_eq!(out.bias[0], 0.0);
        assert_ne!(out.bias[1], 0.0);
    }

    #[test]
    fn zero_lr_leaves_params_unchanged() {
        let mut params = NetworkParams::init(toy_spec(), 1).unwrap();
        let before = params.clone();
        let obs = [0.4, -0.2, 0.9];
        let block = [0.25; 8];
        let batch = [Sample {
            observation: &obs,
            state_block: &block,
            label: 0,
            action: 0,
            target_q: 1.0,
        }];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        params.train_step(&batch, 0.0, &mut rng).unwrap();
        assert_eq!(params, before);
    }

    #[test]
    fn checkpoint_round_trip_is_exact() {
        let params = NetworkParams::init(toy_spec(), 77).unwrap();
        let back = NetworkParams::from_json(&params.to_json().unwrap()).unwrap();
        assert_eq!(back, params);
    }

    #[test]
    fn checkpoint_rejects_wrong_shapes() {
        let params = NetworkParams::init(toy_spec(), 77).unwrap();
        let mut doc: serde_json::Value = serde_json::from_str(&params.to_json().unwrap()).unwrap();
        doc["spec"]["feature_dim"] = serde_json::json!(9);
        assert!(NetworkParams::from_json(&doc.to_string()).is_err());
    }
}
