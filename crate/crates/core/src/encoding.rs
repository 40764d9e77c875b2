//! Spike encoding of real-valued series: a population of current-based
//! integrate-and-fire neurons with fixed Gaussian tuning curves, either
//! driven all at once (population mode) or gated so that only the neuron
//! cluster owning the current value's interval receives input (regional
//! mode).

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, TimeSeriesSample};
use crate::error::{Error, Result};
use crate::spiking::SpikeTensor;

/// Threshold of the encoder's integrate-and-fire accumulator.
const ENCODER_THRESHOLD: f64 = 1.0;

/// Equal-width partition of the observed value range into M intervals,
/// each owned by a cluster of `cluster_size` encoder neurons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuePartition {
    pub boundaries: Vec<f64>,
    pub cluster_size: usize,
}

impl ValuePartition {
    pub fn m_intervals(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn n_input(&self) -> usize {
        self.m_intervals() * self.cluster_size
    }

    pub fn lo(&self) -> f64 {
        self.boundaries[0]
    }

    pub fn hi(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }

    /// Interval index owning `x`. Intervals are left-closed with the last
    /// one right-closed; out-of-range values clamp to the edge intervals.
    pub fn interval_of(&self, x: f64) -> usize {
        let m = self.m_intervals();
        if x <= self.lo() {
            return 0;
        }
        if x >= self.hi() {
            return m - 1;
        }
        // Boundaries are equal width; direct index then guard for rounding.
        let width = (self.hi() - self.lo()) / m as f64;
        let mut idx = ((x - self.lo()) / width) as usize;
        if idx >= m {
            idx = m - 1;
        }
        while idx + 1 < m && x >= self.boundaries[idx + 1] {
            idx += 1;
        }
        while idx > 0 && x < self.boundaries[idx] {
            idx -= 1;
        }
        idx
    }
}

/// Fit an equal-width partition over the training set's global value range.
/// Multivariate series are reduced per timestep to the mean across
/// variables before partitioning.
pub fn fit_partition(dataset: &Dataset, m: usize, cluster_size: usize) -> Result<ValuePartition> {
    if m == 0 || cluster_size == 0 {
        return Err(Error::InvalidArgument {
            name: "m",
            message: "interval count and cluster size must be positive".into(),
        });
    }
    let (lo, hi) = dataset.value_range();
    if !(hi > lo) {
        return Err(Error::Data(format!(
            "dataset values are constant (min == max == {lo}); an equal-width partition is \
             undefined — use M=1, which reduces regional encoding to population encoding"
        )));
    }
    let width = (hi - lo) / m as f64;
    let mut boundaries: Vec<f64> = (0..=m).map(|i| lo + width * i as f64).collect();
    // Pin the last boundary so the range is covered exactly.
    boundaries[m] = hi;
    Ok(ValuePartition {
        boundaries,
        cluster_size,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncoderMode {
    Population,
    Regional,
}

/// Gaussian tuning curve of one encoder neuron: its response to value `x`
/// is `gain * exp(-(x-center)^2 / (2 width^2))`, fed as input current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TuningCurve {
    pub center: f64,
    pub width: f64,
    pub gain: f64,
}

impl TuningCurve {
    pub fn response(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.width;
        self.gain * (-0.5 * z * z).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderConfig {
    pub n_input: usize,
    pub mode: EncoderMode,
    pub tuning: Vec<TuningCurve>,
    pub partition: Option<ValuePartition>,
}

impl EncoderConfig {
    /// Population encoder with evenly spaced tuning centers over `[lo, hi]`.
    pub fn population(n_input: usize, lo: f64, hi: f64, gain: f64) -> Result<Self> {
        if n_input == 0 {
            return Err(Error::InvalidArgument {
                name: "n_input",
                message: "need at least one encoder neuron".into(),
            });
        }
        Ok(EncoderConfig {
            n_input,
            mode: EncoderMode::Population,
            tuning: spaced_tuning(n_input, lo, hi, gain),
            partition: None,
        })
    }

    /// Regional encoder: each interval's cluster gets evenly spaced centers
    /// within its own interval. With M = 1 this produces exactly the
    /// population layout, so the two modes coincide.
    pub fn regional(partition: ValuePartition, gain: f64) -> Result<Self> {
        let m = partition.m_intervals();
        if m == 0 {
            return Err(Error::InvalidArgument {
                name: "partition",
                message: "partition must have at least one interval".into(),
            });
        }
        let mut tuning = Vec::with_capacity(partition.n_input());
        for i in 0..m {
            let lo = partition.boundaries[i];
            let hi = partition.boundaries[i + 1];
            tuning.extend(spaced_tuning(partition.cluster_size, lo, hi, gain));
        }
        Ok(EncoderConfig {
            n_input: partition.n_input(),
            mode: EncoderMode::Regional,
            tuning,
            partition: Some(partition),
        })
    }

    fn validate(&self) -> Result<()> {
        if self.tuning.len() != self.n_input {
            return Err(Error::DimensionMismatch {
                context: "encoder tuning",
                expected: self.n_input,
                actual: self.tuning.len(),
            });
        }
        if self.mode == EncoderMode::Regional {
            match &self.partition {
                None => {
                    return Err(Error::InvalidArgument {
                        name: "partition",
                        message: "regional mode requires a fitted partition".into(),
                    })
                }
                Some(p) => {
                    if p.n_input() != self.n_input {
                        return Err(Error::DimensionMismatch {
                            context: "partition clusters",
                            expected: self.n_input,
                            actual: p.n_input(),
                        });
                    }
                    if p.m_intervals() > self.n_input {
                        return Err(Error::InvalidArgument {
                            name: "partition",
                            message: "more intervals than encoder neurons".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn spaced_tuning(n: usize, lo: f64, hi: f64, gain: f64) -> Vec<TuningCurve> {
    let span = hi - lo;
    let spacing = span / n as f64;
    let width = (spacing * 1.5).max(1e-9);
    (0..n)
        .map(|i| TuningCurve {
            center: lo + spacing * (i as f64 + 0.5),
            width,
            gain,
        })
        .collect()
}

/// Which neurons receive drive at a given scalar value.
fn drive_range(config: &EncoderConfig, x: f64) -> (usize, usize) {
    match (&config.mode, &config.partition) {
        (EncoderMode::Regional, Some(p)) => {
            let interval = p.interval_of(x);
            (interval * p.cluster_size, (interval + 1) * p.cluster_size)
        }
        _ => (0, config.n_input),
    }
}

/// Encode one sample. Every encoder neuron is a current-based
/// integrate-and-fire accumulator: it adds its tuning response to the
/// driven value each step, emits a spike when the accumulator crosses
/// threshold, and subtracts the threshold on fire. In regional mode only
/// the cluster owning the value's interval is charged; all other clusters
/// receive zero input at that step.
pub fn encode(sample: &TimeSeriesSample, config: &EncoderConfig) -> Result<SpikeTensor> {
    config.validate()?;
    if sample.steps == 0 {
        return Err(Error::Data("cannot encode an empty sample".into()));
    }
    let mut accumulator = vec![0.0f64; config.n_input];
    let mut tensor = SpikeTensor::zeros(sample.steps, config.n_input);
    for t in 0..sample.steps {
        let x = sample.scalar_at(t);
        let (start, end) = drive_range(config, x);
        for j in start..end {
            accumulator[j] += config.tuning[j].response(x);
        }
        for (j, acc) in accumulator.iter_mut().enumerate() {
            if *acc >= ENCODER_THRESHOLD {
                *acc -= ENCODER_THRESHOLD;
                tensor.set(t, j, 1);
            }
        }
    }
    if !sample.regular_unit_grid() {
        tensor = tensor.with_timestamps(Some(sample.timestamps.clone()))?;
    }
    Ok(tensor)
}

/// Population-mode entry point; errors if the config is regional.
pub fn encode_population(sample: &TimeSeriesSample, config: &EncoderConfig) -> Result<SpikeTensor> {
    if config.mode != EncoderMode::Population {
        return Err(Error::InvalidArgument {
            name: "config",
            message: "encode_population requires population mode".into(),
        });
    }
    encode(sample, config)
}

/// Regional-mode entry point; errors if the config lacks a partition.
pub fn encode_regional(sample: &TimeSeriesSample, config: &EncoderConfig) -> Result<SpikeTensor> {
    if config.mode != EncoderMode::Regional {
        return Err(Error::InvalidArgument {
            name: "config",
            message: "encode_regional requires regional mode".into(),
        });
    }
    encode(sample, config)
}

/// Step-by-cluster drive mask for a sample: `mask[t][c] == 1` when cluster
/// `c` receives input at step `t`. Population mode drives all neurons as a
/// single cluster.
pub fn drive_pattern(sample: &TimeSeriesSample, config: &EncoderConfig) -> Result<Vec<Vec<u8>>> {
    config.validate()?;
    let clusters = match (&config.mode, &config.partition) {
        (EncoderMode::Regional, Some(p)) => p.m_intervals(),
        _ => 1,
    };
    let mut mask = vec![vec![0u8; clusters]; sample.steps];
    for t in 0..sample.steps {
        let cluster = match (&config.mode, &config.partition) {
            (EncoderMode::Regional, Some(p)) => p.interval_of(sample.scalar_at(t)),
            _ => 0,
        };
        mask[t][cluster] = 1;
    }
    Ok(mask)
}

/// Encode a whole dataset.
pub fn encode_dataset(dataset: &Dataset, config: &EncoderConfig) -> Result<Vec<SpikeTensor>> {
    dataset.samples.iter().map(|s| encode(s, config)).collect()
}
