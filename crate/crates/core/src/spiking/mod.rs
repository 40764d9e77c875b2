//! Discrete-time simulation of leaky integrate-and-fire layers with
//! double-exponential synaptic traces, optional per-layer recurrence, a
//! threshold-scaled reset trace, and closed-form exponential decay for
//! event-driven stepping over irregular time grids.

mod theorem1;

pub use theorem1::{theorem1_demo, OrderDemo, OrderDemoConfig, OrderDemoOutcome};

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// How the synapse kernel's scale factor is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum V0Mode {
    /// eta / (eta - 1) with eta = tau_m / tau_s.
    PaperFormula,
    /// Scale so the kernel's true peak equals 1.
    ExactPeakNormalizer,
}

/// Per-layer neuron constants. `alpha`, `beta`, `gamma` are the per-step
/// decay factors exp(-dt/tau) for the configured dt (1 timestep).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronParams {
    pub tau_m: f64,
    pub tau_s: f64,
    pub tau: f64,
    pub v_threshold: f64,
    pub v0_mode: V0Mode,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Minimum separation of tau_m and tau_s; equal constants make the kernel
/// identically zero and the scale factor singular.
const TAU_SEPARATION: f64 = 1e-6;

impl NeuronParams {
    pub fn new(tau_m: f64, tau_s: f64, tau: f64, v_threshold: f64, v0_mode: V0Mode) -> Result<Self> {
        if !(tau_m > 0.0 && tau_s > 0.0 && tau > 0.0) {
            return Err(Error::InvalidArgument {
                name: "tau",
                message: format!("time constants must be positive: tau_m={tau_m}, tau_s={tau_s}, tau={tau}"),
            });
        }
        if (tau_m - tau_s).abs() <= TAU_SEPARATION {
            return Err(Error::InvalidArgument {
                name: "tau_m",
                message: format!("tau_m ({tau_m}) and tau_s ({tau_s}) must differ"),
            });
        }
        if !(v_threshold > 0.0) {
            return Err(Error::InvalidArgument {
                name: "v_threshold",
                message: format!("threshold must be positive, got {v_threshold}"),
            });
        }
        Ok(NeuronParams {
            tau_m,
            tau_s,
            tau,
            v_threshold,
            v0_mode,
            alpha: (-1.0 / tau_m).exp(),
            beta: (-1.0 / tau_s).exp(),
            gamma: (-1.0 / tau).exp(),
        })
    }

    /// Kernel scale factor for the configured mode.
    pub fn v0(&self) -> f64 {
        let eta = self.tau_m / self.tau_s;
        match self.v0_mode {
            V0Mode::PaperFormula => eta / (eta - 1.0),
            V0Mode::ExactPeakNormalizer => {
                // Peak of e^(-t/tau_m) - e^(-t/tau_s) at
                // t* = ln(tau_m/tau_s) * tau_m tau_s / (tau_m - tau_s).
                let t_star = eta.ln() * self.tau_m * self.tau_s / (self.tau_m - self.tau_s);
                let raw = (-t_star / self.tau_m).exp() - (-t_star / self.tau_s).exp();
                1.0 / raw
            }
        }
    }

    /// Kernel value at time t since an input spike.
    pub fn kernel(&self, t: f64) -> f64 {
        self.v0() * ((-t / self.tau_m).exp() - (-t / self.tau_s).exp())
    }

    /// Draw per-layer constants from the configured normal distributions,
    /// clamping to >= 1 so decay factors stay in (0, 1). Retries the
    /// membrane constant if it lands within the separation guard of tau_s.
    pub fn sample(
        spec: &NeuronParamSpec,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let draw = |mu: f64, sigma: f64, rng: &mut ChaCha8Rng| -> f64 {
            if sigma <= 0.0 {
                return mu.max(1.0);
            }
            Normal::new(mu, sigma).unwrap().sample(rng).max(1.0)
        };
        let tau_s = draw(spec.tau_s_mu, spec.tau_s_sigma, rng);
        let mut tau_m = draw(spec.tau_m_mu, spec.tau_m_sigma, rng);
        while (tau_m - tau_s).abs() <= TAU_SEPARATION {
            tau_m = draw(spec.tau_m_mu, spec.tau_m_sigma, rng);
        }
        let tau = draw(spec.tau_mu, spec.tau_sigma, rng);
        NeuronParams::new(tau_m, tau_s, tau, spec.v_threshold, spec.v0_mode)
    }
}

/// Distribution the per-layer constants are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronParamSpec {
    pub tau_m_mu: f64,
    pub tau_m_sigma: f64,
    pub tau_s_mu: f64,
    pub tau_s_sigma: f64,
    pub tau_mu: f64,
    pub tau_sigma: f64,
    pub v_threshold: f64,
    pub v0_mode: V0Mode,
}

impl Default for NeuronParamSpec {
    fn default() -> Self {
        NeuronParamSpec {
            tau_m_mu: 20.0,
            tau_m_sigma: 5.0,
            tau_s_mu: 150.0,
            tau_s_sigma: 10.0,
            tau_mu: 20.0,
            tau_sigma: 5.0,
            v_threshold: 1.0,
            v0_mode: V0Mode::PaperFormula,
        }
    }
}

/// Binary spike trains over (timestep x neuron), with optional real-valued
/// timestamps for irregularly sampled runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeTensor {
    pub steps: usize,
    pub neurons: usize,
    spikes: Vec<u8>,
    pub timestamps: Option<Vec<f64>>,
}

impl SpikeTensor {
    pub fn zeros(steps: usize, neurons: usize) -> Self {
        SpikeTensor {
            steps,
            neurons,
            spikes: vec![0; steps * neurons],
            timestamps: None,
        }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>, timestamps: Option<Vec<f64>>) -> Result<Self> {
        let steps = rows.len();
        let neurons = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut spikes = Vec::with_capacity(steps * neurons);
        for row in &rows {
            if row.len() != neurons {
                return Err(Error::DimensionMismatch {
                    context: "spike tensor row",
                    expected: neurons,
                    actual: row.len(),
                });
            }
            spikes.extend_from_slice(row);
        }
        let tensor = SpikeTensor {
            steps,
            neurons,
            spikes,
            timestamps: None,
        };
        tensor.with_timestamps(timestamps)
    }

    pub fn with_timestamps(mut self, timestamps: Option<Vec<f64>>) -> Result<Self> {
        if let Some(ts) = &timestamps {
            if ts.len() != self.steps {
                return Err(Error::DimensionMismatch {
                    context: "spike tensor timestamps",
                    expected: self.steps,
                    actual: ts.len(),
                });
            }
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Data("timestamps must be strictly increasing".into()));
            }
        }
        if self.spikes.iter().any(|&s| s > 1) {
            return Err(Error::Data("spike entries must be 0 or 1".into()));
        }
        self.timestamps = timestamps;
        Ok(self)
    }

    #[inline]
    pub fn get(&self, step: usize, neuron: usize) -> u8 {
        self.spikes[step * self.neurons + neuron]
    }

    pub fn set(&mut self, step: usize, neuron: usize, value: u8) {
        debug_assert!(value <= 1);
        self.spikes[step * self.neurons + neuron] = value;
    }

    pub fn row(&self, step: usize) -> &[u8] {
        &self.spikes[step * self.neurons..(step + 1) * self.neurons]
    }

    /// Total spikes per neuron over all steps.
    pub fn counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.neurons];
        for step in 0..self.steps {
            for (c, &s) in counts.iter_mut().zip(self.row(step)) {
                *c += s as u32;
            }
        }
        counts
    }

    pub fn total_spikes(&self) -> u64 {
        self.spikes.iter().map(|&s| s as u64).sum()
    }
}

/// Per-layer simulation state. The synaptic traces are indexed by input
/// synapse: first the feedforward fan-in, then (for recurrent layers) one
/// slot per own neuron carrying the previous step's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerState {
    pub m_trace: Vec<f64>,
    pub h_trace: Vec<f64>,
    pub r_trace: Vec<f64>,
    pub v_membrane: Vec<f64>,
    pub o_output: Vec<f64>,
}

impl LayerState {
    pub fn zeros(fan_in: usize, neurons: usize, recurrent: bool) -> Self {
        let drive = fan_in + if recurrent { neurons } else { 0 };
        LayerState {
            m_trace: vec![0.0; drive],
            h_trace: vec![0.0; drive],
            r_trace: vec![0.0; neurons],
            v_membrane: vec![0.0; neurons],
            o_output: vec![0.0; neurons],
        }
    }

    pub fn neurons(&self) -> usize {
        self.v_membrane.len()
    }

    pub fn drive_len(&self) -> usize {
        self.m_trace.len()
    }

    fn check_finite(&self, layer: usize, step: usize) -> Result<()> {
        for (i, v) in self.v_membrane.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteState {
                    layer,
                    neuron: i,
                    step,
                });
            }
        }
        for trace in [&self.m_trace, &self.h_trace] {
            for (i, v) in trace.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteState {
                        layer,
                        neuron: i,
                        step,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Weights into one layer: a dense feedforward block and an optional square
/// recurrent block over the layer's own previous outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerWeights {
    pub ff: Mat,
    pub rec: Option<Mat>,
}

impl LayerWeights {
    pub fn neurons(&self) -> usize {
        self.ff.rows
    }

    pub fn fan_in(&self) -> usize {
        self.ff.cols
    }

    pub fn is_recurrent(&self) -> bool {
        self.rec.is_some()
    }

    pub fn drive_len(&self) -> usize {
        self.fan_in() + if self.is_recurrent() { self.neurons() } else { 0 }
    }
}

/// Gaussian weight initialization parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightInit {
    pub mu: f64,
    pub sigma: f64,
}

/// The network: layer sizes (input first), per-layer recurrence flags, and
/// the weight matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTopology {
    pub layer_sizes: Vec<usize>,
    pub recurrent: Vec<bool>,
    pub weights: Vec<LayerWeights>,
}

impl NetworkTopology {
    /// Randomly initialized topology. `layer_sizes[0]` is the input width;
    /// `recurrent[l]` applies to the layer fed by `weights[l]`.
    pub fn random(
        layer_sizes: &[usize],
        recurrent: &[bool],
        init: WeightInit,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::InvalidArgument {
                name: "layer_sizes",
                message: "need at least input and output layers".into(),
            });
        }
        if recurrent.len() != layer_sizes.len() - 1 {
            return Err(Error::DimensionMismatch {
                context: "recurrent flags",
                expected: layer_sizes.len() - 1,
                actual: recurrent.len(),
            });
        }
        let mut weights = Vec::with_capacity(layer_sizes.len() - 1);
        for l in 0..layer_sizes.len() - 1 {
            let (fan_in, n) = (layer_sizes[l], layer_sizes[l + 1]);
            let ff = Mat::gaussian(n, fan_in, init.mu, init.sigma, rng);
            let rec = recurrent[l].then(|| Mat::gaussian(n, n, init.mu, init.sigma, rng));
            weights.push(LayerWeights { ff, rec });
        }
        Ok(NetworkTopology {
            layer_sizes: layer_sizes.to_vec(),
            recurrent: recurrent.to_vec(),
            weights,
        })
    }

    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.layer_sizes.len() - 1 {
            return Err(Error::DimensionMismatch {
                context: "weight blocks",
                expected: self.layer_sizes.len() - 1,
                actual: self.weights.len(),
            });
        }
        for (l, w) in self.weights.iter().enumerate() {
            if w.ff.rows != self.layer_sizes[l + 1] || w.ff.cols != self.layer_sizes[l] {
                return Err(Error::DimensionMismatch {
                    context: "feedforward weight shape",
                    expected: self.layer_sizes[l + 1] * self.layer_sizes[l],
                    actual: w.ff.rows * w.ff.cols,
                });
            }
            if let Some(rec) = &w.rec {
                if rec.rows != rec.cols || rec.rows != self.layer_sizes[l + 1] {
                    return Err(Error::DimensionMismatch {
                        context: "recurrent weight shape",
                        expected: self.layer_sizes[l + 1],
                        actual: rec.rows,
                    });
                }
            }
            if w.rec.is_some() != self.recurrent[l] {
                return Err(Error::Data(format!(
                    "layer {l}: recurrent flag and weight presence disagree"
                )));
            }
        }
        Ok(())
    }
}

/// One synchronous update of a layer (unit timestep).
///
/// M[t] = alpha M[t-1] + in,  H[t] = beta H[t-1] + in,
/// R[t] = gamma R[t-1] + O[t-1],
/// I[t] = V0 sum_j w_ij (M_j - H_j),  V[t] = I[t] - Vth R[t],
/// O[t] = step(V[t] - Vth).
///
/// For recurrent layers the previous step's own output extends the input
/// drive, so the recurrent synapses keep their own trace slots.
pub fn step_layer(
    state: &LayerState,
    input: &[f64],
    params: &NeuronParams,
    weights: &LayerWeights,
) -> Result<LayerState> {
    step_layer_at(state, input, params, weights, 0, 0)
}

pub(crate) fn step_layer_at(
    state: &LayerState,
    input: &[f64],
    params: &NeuronParams,
    weights: &LayerWeights,
    layer: usize,
    step: usize,
) -> Result<LayerState> {
    let n = weights.neurons();
    let fan_in = weights.fan_in();
    if input.len() != fan_in {
        return Err(Error::DimensionMismatch {
            context: "layer input",
            expected: fan_in,
            actual: input.len(),
        });
    }
    if state.drive_len() != weights.drive_len() || state.neurons() != n {
        return Err(Error::DimensionMismatch {
            context: "layer state",
            expected: weights.drive_len(),
            actual: state.drive_len(),
        });
    }

    let mut next = LayerState {
        m_trace: vec![0.0; state.drive_len()],
        h_trace: vec![0.0; state.drive_len()],
        r_trace: vec![0.0; n],
        v_membrane: vec![0.0; n],
        o_output: vec![0.0; n],
    };

    for j in 0..fan_in {
        next.m_trace[j] = params.alpha * state.m_trace[j] + input[j];
        next.h_trace[j] = params.beta * state.h_trace[j] + input[j];
    }
    if weights.is_recurrent() {
        for k in 0..n {
            let j = fan_in + k;
            let prev_out = state.o_output[k];
            next.m_trace[j] = params.alpha * state.m_trace[j] + prev_out;
            next.h_trace[j] = params.beta * state.h_trace[j] + prev_out;
        }
    }
    for i in 0..n {
        next.r_trace[i] = params.gamma * state.r_trace[i] + state.o_output[i];
    }

    let v0 = params.v0();
    let mut psp: Vec<f64> = vec![0.0; state.drive_len()];
    for j in 0..state.drive_len() {
        psp[j] = next.m_trace[j] - next.h_trace[j];
    }
    let mut current = vec![0.0; n];
    weights.ff.matvec_add(&psp[..fan_in], v0, &mut current);
    if let Some(rec) = &weights.rec {
        rec.matvec_add(&psp[fan_in..], v0, &mut current);
    }
    for i in 0..n {
        next.v_membrane[i] = current[i] - params.v_threshold * next.r_trace[i];
        next.o_output[i] = if next.v_membrane[i] >= params.v_threshold {
            1.0
        } else {
            0.0
        };
    }

    next.check_finite(layer, step)?;
    Ok(next)
}

/// Closed-form exponential decay of the traces over a spike-free interval:
/// M *= e^(-dt/tau_m), H *= e^(-dt/tau_s), R *= e^(-dt/tau). The membrane
/// and output fields are left to the next drive evaluation; an arriving
/// spike adds its unit charge via the following step.
pub fn decay_to(state: &LayerState, delta_t: f64, params: &NeuronParams) -> Result<LayerState> {
    if !(delta_t >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "delta_t",
            message: format!("decay interval must be non-negative, got {delta_t}"),
        });
    }
    let mut next = state.clone();
    if delta_t == 0.0 {
        return Ok(next);
    }
    let dm = (-delta_t / params.tau_m).exp();
    let dh = (-delta_t / params.tau_s).exp();
    let dr = (-delta_t / params.tau).exp();
    for v in &mut next.m_trace {
        *v *= dm;
    }
    for v in &mut next.h_trace {
        *v *= dh;
    }
    for v in &mut next.r_trace {
        *v *= dr;
    }
    Ok(next)
}

/// Event-driven update: advance a layer by `delta` time units in one jump,
/// then apply the input arriving at the new time. Matches `step_layer`
/// exactly when `delta == 1`. The previous output's reset contribution
/// enters one unit after it fired and decays for the remaining `delta - 1`.
pub(crate) fn event_step(
    state: &LayerState,
    input: &[f64],
    delta: f64,
    params: &NeuronParams,
    weights: &LayerWeights,
    layer: usize,
    step: usize,
) -> Result<LayerState> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument {
            name: "delta",
            message: format!("event interval must be positive, got {delta}"),
        });
    }
    let n = weights.neurons();
    let fan_in = weights.fan_in();
    if input.len() != fan_in {
        return Err(Error::DimensionMismatch {
            context: "layer input",
            expected: fan_in,
            actual: input.len(),
        });
    }

    let dm = (-delta / params.tau_m).exp();
    let dh = (-delta / params.tau_s).exp();
    let dr = (-delta / params.tau).exp();
    let dr_out = (-(delta - 1.0) / params.tau).exp();

    let mut next = LayerState {
        m_trace: vec![0.0; state.drive_len()],
        h_trace: vec![0.0; state.drive_len()],
        r_trace: vec![0.0; n],
        v_membrane: vec![0.0; n],
        o_output: vec![0.0; n],
    };
    for j in 0..fan_in {
        next.m_trace[j] = dm * state.m_trace[j] + input[j];
        next.h_trace[j] = dh * state.h_trace[j] + input[j];
    }
    if weights.is_recurrent() {
        // The previous output also charges the recurrent synapses once.
        let dm_out = (-(delta - 1.0) / params.tau_m).exp();
        let dh_out = (-(delta - 1.0) / params.tau_s).exp();
        for k in 0..n {
            let j = fan_in + k;
            next.m_trace[j] = dm * state.m_trace[j] + dm_out * state.o_output[k];
            next.h_trace[j] = dh * state.h_trace[j] + dh_out * state.o_output[k];
        }
    }
    for i in 0..n {
        next.r_trace[i] = dr * state.r_trace[i] + dr_out * state.o_output[i];
    }

    let v0 = params.v0();
    let psp: Vec<f64> = next
        .m_trace
        .iter()
        .zip(&next.h_trace)
        .map(|(m, h)| m - h)
        .collect();
    let mut current = vec![0.0; n];
    weights.ff.matvec_add(&psp[..fan_in], v0, &mut current);
    if let Some(rec) = &weights.rec {
        rec.matvec_add(&psp[fan_in..], v0, &mut current);
    }
    for i in 0..n {
        next.v_membrane[i] = current[i] - params.v_threshold * next.r_trace[i];
        next.o_output[i] = if next.v_membrane[i] >= params.v_threshold {
            1.0
        } else {
            0.0
        };
    }
    next.check_finite(layer, step)?;
    Ok(next)
}

/// Per-layer, per-step state history of one forward run.
#[derive(Debug, Clone)]
pub struct NetworkTrace {
    /// `states[layer][step]`
    pub states: Vec<Vec<LayerState>>,
}

impl NetworkTrace {
    /// Spikes emitted by a layer across the run.
    pub fn layer_spike_total(&self, layer: usize) -> f64 {
        self.states[layer]
            .iter()
            .map(|s| s.o_output.iter().sum::<f64>())
            .sum()
    }
}

/// Run the full network over an input spike tensor. When the tensor carries
/// timestamps the layers advance event-driven between arrival times;
/// otherwise every step is one time unit. Returns the output layer's spike
/// train and the full state history.
pub fn run_network(
    input: &SpikeTensor,
    topology: &NetworkTopology,
    params: &[NeuronParams],
    initial: Option<&[LayerState]>,
) -> Result<(SpikeTensor, NetworkTrace)> {
    topology.validate()?;
    if input.neurons != topology.input_size() {
        return Err(Error::DimensionMismatch {
            context: "network input",
            expected: topology.input_size(),
            actual: input.neurons,
        });
    }
    if params.len() != topology.n_layers() {
        return Err(Error::DimensionMismatch {
            context: "per-layer params",
            expected: topology.n_layers(),
            actual: params.len(),
        });
    }

    let mut states: Vec<LayerState> = match initial {
        Some(init) => {
            if init.len() != topology.n_layers() {
                return Err(Error::DimensionMismatch {
                    context: "initial states",
                    expected: topology.n_layers(),
                    actual: init.len(),
                });
            }
            init.to_vec()
        }
        None => topology
            .weights
            .iter()
            .map(|w| LayerState::zeros(w.fan_in(), w.neurons(), w.is_recurrent()))
            .collect(),
    };

    let n_out = topology.output_size();
    let mut output = SpikeTensor::zeros(input.steps, n_out);
    output.timestamps = input.timestamps.clone();
    let mut trace = NetworkTrace {
        states: vec![Vec::with_capacity(input.steps); topology.n_layers()],
    };

    let mut prev_ts: Option<f64> = None;
    for t in 0..input.steps {
        let delta = match (&input.timestamps, prev_ts) {
            (Some(ts), Some(prev)) => ts[t] - prev,
            (Some(_), None) | (None, _) => 1.0,
        };
        prev_ts = input.timestamps.as_ref().map(|ts| ts[t]);

        let mut drive: Vec<f64> = input.row(t).iter().map(|&s| s as f64).collect();
        for (l, w) in topology.weights.iter().enumerate() {
            let next = if delta == 1.0 {
                step_layer_at(&states[l], &drive, &params[l], w, l, t)?
            } else {
                event_step(&states[l], &drive, delta, &params[l], w, l, t)?
            };
            drive = next.o_output.clone();
            trace.states[l].push(next.clone());
            states[l] = next;
        }
        for (i, &o) in states[topology.n_layers() - 1].o_output.iter().enumerate() {
            output.set(t, i, if o >= 1.0 { 1 } else { 0 });
        }
    }
    Ok((output, trace))
}
