//! The spiking classifier: model construction, the firing-count softmax
//! loss, SGD training over curriculum schedules via surrogate-gradient
//! BPTT, deterministic evaluation, and bit-exact checkpointing.

mod bptt;
mod gradcheck;

pub use bptt::{backward, forward, Activation, ForwardRecord, WeightGrads};
pub use gradcheck::{gradient_check, GradCheckReport};

use std::path::Path;

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::curriculum::CurriculumSchedule;
use crate::encoding::EncoderConfig;
use crate::error::{Error, Result};
use crate::metrics::{FiringAccumulator, FiringStats};
use crate::rng::rng_from;
use crate::spiking::{
    LayerState, NetworkTopology, NeuronParamSpec, NeuronParams, SpikeTensor, WeightInit,
};

/// Softmax of output spike counts: the per-class activity distribution.
pub fn activity_from_counts(counts: &[f64]) -> Vec<f64> {
    let max = counts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = counts.iter().map(|c| (c - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|e| e / total).collect()
}

/// Activity distribution from an output spike train; the tensor must have
/// one neuron per class.
pub fn activity_score(output_spikes: &SpikeTensor, n_classes: usize) -> Result<Vec<f64>> {
    if output_spikes.neurons != n_classes {
        return Err(Error::DimensionMismatch {
            context: "activity score",
            expected: n_classes,
            actual: output_spikes.neurons,
        });
    }
    let counts: Vec<f64> = output_spikes.counts().iter().map(|&c| c as f64).collect();
    Ok(activity_from_counts(&counts))
}

/// Cross-entropy against the true class: -log of its activity.
pub fn loss_from_counts(counts: &[f64], label: usize) -> (f64, Vec<f64>) {
    let probs = activity_from_counts(counts);
    (-probs[label].ln(), probs)
}

/// Loss of an output spike train under the true label.
pub fn loss(output_spikes: &SpikeTensor, label: usize) -> Result<f64> {
    if label >= output_spikes.neurons {
        return Err(Error::InvalidArgument {
            name: "label",
            message: format!(
                "label {label} out of range for {} output neurons",
                output_spikes.neurons
            ),
        });
    }
    let counts: Vec<f64> = output_spikes.counts().iter().map(|&c| c as f64).collect();
    Ok(loss_from_counts(&counts, label).0)
}

/// Evaluation summary over a set of samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct LossReport {
    pub per_sample_loss: Vec<f64>,
    /// True-class activity per sample.
    pub activity: Vec<f64>,
    pub predicted_class: Vec<usize>,
    /// Full per-class activity rows, for AUC computation.
    pub probabilities: Vec<Vec<f64>>,
}

impl LossReport {
    pub fn mean_loss(&self) -> f64 {
        if self.per_sample_loss.is_empty() {
            0.0
        } else {
            self.per_sample_loss.iter().sum::<f64>() / self.per_sample_loss.len() as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub lr_decay_factor: f64,
    /// Epoch interval of the step decay; 0 disables it.
    pub lr_decay_every: usize,
    pub surrogate_slope: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// BPTT window; `None` runs the full horizon.
    pub bptt_truncation: Option<usize>,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            learning_rate: 1e-2,
            lr_decay_factor: 0.5,
            lr_decay_every: 10,
            surrogate_slope: 5.0,
            epochs: 100,
            batch_size: 4,
            bptt_truncation: None,
            seed: 42,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0) {
            return Err(Error::InvalidArgument {
                name: "learning_rate",
                message: format!("must be non-negative, got {}", self.learning_rate),
            });
        }
        if !(self.surrogate_slope > 0.0) {
            return Err(Error::InvalidArgument {
                name: "surrogate_slope",
                message: format!("must be positive, got {}", self.surrogate_slope),
            });
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument {
                name: "batch_size",
                message: "must be positive".into(),
            });
        }
        Ok(())
    }

    /// Learning rate after the step-decay schedule at the given epoch.
    pub fn lr_at_epoch(&self, epoch: usize) -> f64 {
        if self.lr_decay_every == 0 {
            return self.learning_rate;
        }
        self.learning_rate * self.lr_decay_factor.powi((epoch / self.lr_decay_every) as i32)
    }
}

/// Structural configuration of a classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub hidden_sizes: Vec<usize>,
    /// Per trainable layer (hidden layers then output).
    pub recurrent: Vec<bool>,
    pub weight_init: WeightInit,
    pub neuron_spec: NeuronParamSpec,
    /// `a` in the membrane initialization range [0, a + 1.8 * lr].
    pub membrane_init_a: f64,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            hidden_sizes: vec![64],
            recurrent: vec![true, false],
            weight_init: WeightInit { mu: 0.05, sigma: 0.2 },
            neuron_spec: NeuronParamSpec::default(),
            membrane_init_a: 20.0,
            seed: 42,
        }
    }
}

/// A trained or trainable spiking classifier: encoder, weights, per-layer
/// neuron constants, the fixed initial state, and the seed it was built
/// from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikingClassifier {
    pub encoder: EncoderConfig,
    pub topology: NetworkTopology,
    pub neuron_params: Vec<NeuronParams>,
    pub initial_states: Vec<LayerState>,
    pub seed: u64,
}

impl SpikingClassifier {
    /// Build a randomly initialized classifier. Membrane potentials start
    /// uniform in [0, a + 1.8 * learning_rate]; neurons already above
    /// threshold emit an initial spike, which seeds early activity.
    pub fn build(
        encoder: EncoderConfig,
        n_classes: usize,
        config: &ModelConfig,
        learning_rate: f64,
    ) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::InvalidArgument {
                name: "n_classes",
                message: format!("need at least two classes, got {n_classes}"),
            });
        }
        let mut layer_sizes = vec![encoder.n_input];
        layer_sizes.extend(&config.hidden_sizes);
        layer_sizes.push(n_classes);
        if config.recurrent.len() != layer_sizes.len() - 1 {
            return Err(Error::DimensionMismatch {
                context: "recurrent flags",
                expected: layer_sizes.len() - 1,
                actual: config.recurrent.len(),
            });
        }

        let mut weight_rng = rng_from(config.seed, "weights");
        let topology = NetworkTopology::random(
            &layer_sizes,
            &config.recurrent,
            config.weight_init,
            &mut weight_rng,
        )?;

        let mut param_rng = rng_from(config.seed, "neuron-params");
        let neuron_params = (0..topology.n_layers())
            .map(|_| NeuronParams::sample(&config.neuron_spec, &mut param_rng))
            .collect::<Result<Vec<_>>>()?;

        let mut membrane_rng = rng_from(config.seed, "membrane-init");
        let init_hi = config.membrane_init_a + 1.8 * learning_rate;
        let initial_states = topology
            .weights
            .iter()
            .zip(&neuron_params)
            .map(|(w, p)| {
                let mut state = LayerState::zeros(w.fan_in(), w.neurons(), w.is_recurrent());
                for i in 0..w.neurons() {
                    let v0: f64 = membrane_rng.random::<f64>() * init_hi;
                    state.v_membrane[i] = v0;
                    state.o_output[i] = if v0 >= p.v_threshold { 1.0 } else { 0.0 };
                }
                state
            })
            .collect();

        Ok(SpikingClassifier {
            encoder,
            topology,
            neuron_params,
            initial_states,
            seed: config.seed,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.topology.output_size()
    }

    /// Hard-spiking forward pass of one encoded sample.
    pub fn forward_hard(&self, input: &SpikeTensor, slope: f64) -> Result<ForwardRecord> {
        forward(
            input,
            &self.topology,
            &self.neuron_params,
            &self.initial_states,
            Activation::Hard,
            slope,
        )
    }
}

/// An encoded dataset ready for training: one spike tensor per sample.
#[derive(Debug, Clone)]
pub struct EncodedDataset {
    pub tensors: Vec<SpikeTensor>,
    pub labels: Vec<usize>,
    pub n_classes: usize,
}

impl EncodedDataset {
    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }
}

/// Per-epoch training outcome.
#[derive(Debug, Clone)]
pub struct EpochOutcome {
    /// Mean loss over the batches actually presented this epoch.
    pub presented_loss: f64,
    /// Post-epoch evaluation over the full training set.
    pub train_report: LossReport,
    pub firing: FiringStats,
    pub gradient_steps: usize,
}

/// Owns a model through training: learning-rate schedule and the global
/// step counter the pacing function consumes.
#[derive(Debug, Clone)]
pub struct Trainer {
    pub model: SpikingClassifier,
    pub opt: OptimizerConfig,
    pub global_step: usize,
}

impl Trainer {
    pub fn new(model: SpikingClassifier, opt: OptimizerConfig) -> Result<Self> {
        opt.validate()?;
        Ok(Trainer {
            model,
            opt,
            global_step: 0,
        })
    }

    /// Number of gradient steps per epoch: enough batches to cover the
    /// dataset once at the nominal batch size.
    pub fn steps_per_epoch(&self, n_samples: usize) -> usize {
        n_samples.div_ceil(self.opt.batch_size).max(1)
    }

    /// One epoch of curriculum training. Each training step m presents the
    /// first `pace(m)` samples of the schedule order as one mini-batch,
    /// iterated in curriculum order, and takes one mean-gradient SGD step;
    /// the full training set is then re-evaluated for the scorer.
    pub fn train_epoch(
        &mut self,
        data: &EncodedDataset,
        schedule: &CurriculumSchedule,
        epoch: usize,
    ) -> Result<EpochOutcome> {
        if data.is_empty() {
            return Err(Error::Data("cannot train on an empty dataset".into()));
        }
        let lr = self.opt.lr_at_epoch(epoch);
        let steps = self.steps_per_epoch(data.len());
        let slope = self.opt.surrogate_slope;

        let mut presented_total = 0.0;
        for _ in 0..steps {
            let limit = schedule.size_at(self.global_step).min(data.len());
            let batch = &schedule.order[..limit];

            let mut grads = WeightGrads::zeros_like(&self.model.topology);
            let mut batch_loss = 0.0;
            for &idx in batch {
                let record = self.model.forward_hard(&data.tensors[idx], slope)?;
                let (sample_loss, probs) = loss_from_counts(&record.counts, data.labels[idx]);
                batch_loss += sample_loss;
                let mut count_grads = probs;
                count_grads[data.labels[idx]] -= 1.0;
                let sample_grads = backward(
                    &record,
                    &self.model.topology,
                    &self.model.neuron_params,
                    &count_grads,
                    slope,
                    self.opt.bptt_truncation,
                );
                grads.accumulate(&sample_grads);
            }
            grads.scale(1.0 / batch.len() as f64);
            if !grads.is_finite() {
                return Err(Error::NonFiniteGradient {
                    epoch,
                    step: self.global_step,
                });
            }
            presented_total += batch_loss / batch.len() as f64;

            if lr > 0.0 {
                for (l, w) in self.model.topology.weights.iter_mut().enumerate() {
                    w.ff.add_scaled(&grads.ff[l], -lr);
                    if let (Some(rec), Some(grec)) = (w.rec.as_mut(), grads.rec[l].as_ref()) {
                        rec.add_scaled(grec, -lr);
                    }
                }
            }
            self.global_step += 1;
        }

        let (train_report, firing) = evaluate_encoded(&self.model, data, slope)?;
        Ok(EpochOutcome {
            presented_loss: presented_total / steps as f64,
            train_report,
            firing,
            gradient_steps: steps,
        })
    }
}

/// Deterministic evaluation pass: no weight mutation, hard spiking.
pub fn evaluate_encoded(
    model: &SpikingClassifier,
    data: &EncodedDataset,
    slope: f64,
) -> Result<(LossReport, FiringStats)> {
    let mut report = LossReport::default();
    let mut firing = FiringAccumulator::default();
    for (tensor, &label) in data.tensors.iter().zip(&data.labels) {
        let record = forward(
            tensor,
            &model.topology,
            &model.neuron_params,
            &model.initial_states,
            Activation::Hard,
            slope,
        )?;
        let (sample_loss, probs) = loss_from_counts(&record.counts, label);
        let predicted = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        report.per_sample_loss.push(sample_loss);
        report.activity.push(probs[label]);
        report.predicted_class.push(predicted);
        report.probabilities.push(probs);
        for (l, layer) in record.layers.iter().enumerate() {
            firing.record_layer_steps(l, &layer.o);
        }
    }
    Ok((report, firing.finish()))
}

/// Versioned model container; the JSON layout round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub model: SpikingClassifier,
    pub optimizer: OptimizerConfig,
}

pub const CHECKPOINT_VERSION: u32 = 1;

pub fn save_checkpoint(
    model: &SpikingClassifier,
    optimizer: &OptimizerConfig,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let checkpoint = Checkpoint {
        version: CHECKPOINT_VERSION,
        model: model.clone(),
        optimizer: *optimizer,
    };
    let text = serde_json::to_string(&checkpoint)
        .map_err(|e| Error::Data(format!("checkpoint serialization failed: {e}")))?;
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<Checkpoint> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let checkpoint: Checkpoint = serde_json::from_str(&text)
        .map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            message: format!("bad checkpoint: {e}"),
        })?;
    if checkpoint.version != CHECKPOINT_VERSION {
        return Err(Error::Data(format!(
            "unsupported checkpoint version {}",
            checkpoint.version
        )));
    }
    Ok(checkpoint)
}
