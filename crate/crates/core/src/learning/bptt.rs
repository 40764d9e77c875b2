//! Forward unroll and backpropagation through time. The backward pass
//! replaces the step function's derivative with the sigmoid surrogate
//! s * sig(s(V - Vth)) * (1 - sig(s(V - Vth))). In smoothed mode the
//! forward pass itself uses the sigmoid, which makes the analytic
//! gradients exact and finite-difference checkable.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::spiking::{LayerState, NetworkTopology, NeuronParams, SpikeTensor};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    /// Step function: spike when V >= Vth.
    Hard,
    /// sig(slope * (V - Vth)) in the forward pass as well.
    Smoothed,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn surrogate_derivative(v: f64, v_th: f64, slope: f64) -> f64 {
    let s = sigmoid(slope * (v - v_th));
    slope * s * (1.0 - s)
}

/// Per-layer state history of one unrolled forward pass.
#[derive(Debug, Clone)]
pub struct LayerRecord {
    /// Synaptic traces per step, feedforward slots then recurrent slots.
    pub m: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub o: Vec<Vec<f64>>,
}

/// Decay coefficients for one step interval.
#[derive(Debug, Clone, Copy)]
struct StepDecay {
    /// Trace decays over the full interval.
    a: f64,
    b: f64,
    g: f64,
    /// Decay applied to the previous output's unit charge, which enters one
    /// time unit after it fired.
    a_out: f64,
    b_out: f64,
    g_out: f64,
}

impl StepDecay {
    fn for_delta(delta: f64, p: &NeuronParams) -> Self {
        if delta == 1.0 {
            StepDecay {
                a: p.alpha,
                b: p.beta,
                g: p.gamma,
                a_out: 1.0,
                b_out: 1.0,
                g_out: 1.0,
            }
        } else {
            StepDecay {
                a: (-delta / p.tau_m).exp(),
                b: (-delta / p.tau_s).exp(),
                g: (-delta / p.tau).exp(),
                a_out: (-(delta - 1.0) / p.tau_m).exp(),
                b_out: (-(delta - 1.0) / p.tau_s).exp(),
                g_out: (-(delta - 1.0) / p.tau).exp(),
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ForwardRecord {
    pub layers: Vec<LayerRecord>,
    pub deltas: Vec<f64>,
    /// Output-layer activation totals per class (integer-valued in hard mode).
    pub counts: Vec<f64>,
    pub steps: usize,
}

/// Unroll the network over one input tensor, recording everything the
/// backward pass needs. Timestamped tensors advance by their own intervals.
pub fn forward(
    input: &SpikeTensor,
    topology: &NetworkTopology,
    params: &[NeuronParams],
    initial: &[LayerState],
    activation: Activation,
    slope: f64,
) -> Result<ForwardRecord> {
    let n_layers = topology.n_layers();
    if input.neurons != topology.input_size() {
        return Err(Error::DimensionMismatch {
            context: "network input",
            expected: topology.input_size(),
            actual: input.neurons,
        });
    }
    let steps = input.steps;
    let mut layers: Vec<LayerRecord> = (0..n_layers)
        .map(|_| LayerRecord {
            m: Vec::with_capacity(steps),
            h: Vec::with_capacity(steps),
            r: Vec::with_capacity(steps),
            v: Vec::with_capacity(steps),
            o: Vec::with_capacity(steps),
        })
        .collect();
    let mut deltas = Vec::with_capacity(steps);
    let mut counts = vec![0.0; topology.output_size()];

    let mut prev_ts: Option<f64> = None;
    for t in 0..steps {
        let delta = match (&input.timestamps, prev_ts) {
            (Some(ts), Some(prev)) => ts[t] - prev,
            _ => 1.0,
        };
        prev_ts = input.timestamps.as_ref().map(|ts| ts[t]);
        deltas.push(delta);

        let mut drive: Vec<f64> = input.row(t).iter().map(|&s| s as f64).collect();
        for l in 0..n_layers {
            let w = &topology.weights[l];
            let p = &params[l];
            let d = StepDecay::for_delta(delta, p);
            let fan_in = w.fan_in();
            let n = w.neurons();
            let drive_len = w.drive_len();

            let (prev_m, prev_h, prev_r, prev_o): (&[f64], &[f64], &[f64], &[f64]) = if t == 0 {
                (
                    &initial[l].m_trace,
                    &initial[l].h_trace,
                    &initial[l].r_trace,
                    &initial[l].o_output,
                )
            } else {
                (
                    &layers[l].m[t - 1],
                    &layers[l].h[t - 1],
                    &layers[l].r[t - 1],
                    &layers[l].o[t - 1],
                )
            };

            let mut m = vec![0.0; drive_len];
            let mut h = vec![0.0; drive_len];
            for j in 0..fan_in {
                m[j] = d.a * prev_m[j] + drive[j];
                h[j] = d.b * prev_h[j] + drive[j];
            }
            if w.is_recurrent() {
                for k in 0..n {
                    let j = fan_in + k;
                    m[j] = d.a * prev_m[j] + d.a_out * prev_o[k];
                    h[j] = d.b * prev_h[j] + d.b_out * prev_o[k];
                }
            }
            let mut r = vec![0.0; n];
            for i in 0..n {
                r[i] = d.g * prev_r[i] + d.g_out * prev_o[i];
            }

            let v0 = p.v0();
            let psp: Vec<f64> = m.iter().zip(&h).map(|(a, b)| a - b).collect();
            let mut current = vec![0.0; n];
            w.ff.matvec_add(&psp[..fan_in], v0, &mut current);
            if let Some(rec) = &w.rec {
                rec.matvec_add(&psp[fan_in..], v0, &mut current);
            }
            let mut v = vec![0.0; n];
            let mut o = vec![0.0; n];
            for i in 0..n {
                v[i] = current[i] - p.v_threshold * r[i];
                if !v[i].is_finite() {
                    return Err(Error::NonFiniteState {
                        layer: l,
                        neuron: i,
                        step: t,
                    });
                }
                o[i] = match activation {
                    Activation::Hard => {
                        if v[i] >= p.v_threshold {
                            1.0
                        } else {
                            0.0
                        }
                    }
                    Activation::Smoothed => sigmoid(slope * (v[i] - p.v_threshold)),
                };
            }

            drive = o.clone();
            layers[l].m.push(m);
            layers[l].h.push(h);
            layers[l].r.push(r);
            layers[l].v.push(v);
            layers[l].o.push(o);
        }
        for (c, &o) in counts.iter_mut().zip(layers[n_layers - 1].o[t].iter()) {
            *c += o;
        }
    }

    Ok(ForwardRecord {
        layers,
        deltas,
        counts,
        steps,
    })
}

/// Gradients for every weight block, same shapes as the topology's.
#[derive(Debug, Clone)]
pub struct WeightGrads {
    pub ff: Vec<Mat>,
    pub rec: Vec<Option<Mat>>,
}

impl WeightGrads {
    pub fn zeros_like(topology: &NetworkTopology) -> Self {
        WeightGrads {
            ff: topology
                .weights
                .iter()
                .map(|w| Mat::zeros(w.ff.rows, w.ff.cols))
                .collect(),
            rec: topology
                .weights
                .iter()
                .map(|w| w.rec.as_ref().map(|r| Mat::zeros(r.rows, r.cols)))
                .collect(),
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for m in &mut self.ff {
            for v in &mut m.data {
                *v *= factor;
            }
        }
        for m in self.rec.iter_mut().flatten() {
            for v in &mut m.data {
                *v *= factor;
            }
        }
    }

    pub fn accumulate(&mut self, other: &WeightGrads) {
        for (a, b) in self.ff.iter_mut().zip(&other.ff) {
            a.add_scaled(b, 1.0);
        }
        for (a, b) in self.rec.iter_mut().zip(&other.rec) {
            if let (Some(a), Some(b)) = (a.as_mut(), b.as_ref()) {
                a.add_scaled(b, 1.0);
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ff.iter().all(|m| m.is_finite())
            && self.rec.iter().flatten().all(|m| m.is_finite())
    }
}

/// Backpropagate through the recorded unroll. `count_grads` is the loss
/// gradient with respect to the output-layer activation totals. Gradients
/// flow through the M/H/R traces across the whole horizon; `truncation`
/// chunks the carried adjoints into windows of that many steps.
pub fn backward(
    record: &ForwardRecord,
    topology: &NetworkTopology,
    params: &[NeuronParams],
    count_grads: &[f64],
    slope: f64,
    truncation: Option<usize>,
) -> WeightGrads {
    let n_layers = topology.n_layers();
    let steps = record.steps;
    let mut grads = WeightGrads::zeros_like(topology);
    if steps == 0 {
        return grads;
    }

    // Adjoint of each layer's output at every step, fed by the layer above
    // (or the loss, for the top layer).
    let mut upper: Vec<Vec<f64>> = (0..steps).map(|_| count_grads.to_vec()).collect();

    for l in (0..n_layers).rev() {
        let w = &topology.weights[l];
        let p = &params[l];
        let rec_layer = &record.layers[l];
        let fan_in = w.fan_in();
        let n = w.neurons();
        let drive_len = w.drive_len();
        let v0 = p.v0();

        let mut gm_next = vec![0.0; drive_len];
        let mut gh_next = vec![0.0; drive_len];
        let mut gr_next = vec![0.0; n];
        let mut decay_next = StepDecay::for_delta(1.0, p);
        let mut below: Vec<Vec<f64>> = (0..steps).map(|_| vec![0.0; fan_in]).collect();

        for t in (0..steps).rev() {
            let truncate_here = truncation.map(|k| (t + 1) % k.max(1) == 0).unwrap_or(false);
            if truncate_here {
                gm_next.iter_mut().for_each(|g| *g = 0.0);
                gh_next.iter_mut().for_each(|g| *g = 0.0);
                gr_next.iter_mut().for_each(|g| *g = 0.0);
            }

            // Output adjoint: loss/above + own future reset and recurrent
            // trace charges.
            let mut go = upper[t].clone();
            for i in 0..n {
                go[i] += decay_next.g_out * gr_next[i];
            }
            if w.is_recurrent() {
                for k in 0..n {
                    let j = fan_in + k;
                    go[k] += decay_next.a_out * gm_next[j] + decay_next.b_out * gh_next[j];
                }
            }

            // Through the threshold surrogate.
            let mut gv = vec![0.0; n];
            for i in 0..n {
                gv[i] = go[i] * surrogate_derivative(rec_layer.v[t][i], p.v_threshold, slope);
            }

            // Reset trace adjoint.
            let mut gr = vec![0.0; n];
            for i in 0..n {
                gr[i] = -p.v_threshold * gv[i] + decay_next.g * gr_next[i];
            }

            // Synaptic current adjoints.
            let mut gpsp = vec![0.0; drive_len];
            w.ff.matvec_t_add(&gv, v0, &mut gpsp[..fan_in]);
            if let Some(rec) = &w.rec {
                rec.matvec_t_add(&gv, v0, &mut gpsp[fan_in..]);
            }

            // Weight gradients against this step's kernel values.
            let m_t = &rec_layer.m[t];
            let h_t = &rec_layer.h[t];
            let psp: Vec<f64> = m_t.iter().zip(h_t).map(|(a, b)| a - b).collect();
            grads.ff[l].outer_add(&gv, &psp[..fan_in], v0);
            if let Some(grec) = grads.rec[l].as_mut() {
                grec.outer_add(&gv, &psp[fan_in..], v0);
            }

            // Trace adjoints carried to t-1.
            let mut gm = vec![0.0; drive_len];
            let mut gh = vec![0.0; drive_len];
            for j in 0..drive_len {
                gm[j] = gpsp[j] + decay_next.a * gm_next[j];
                gh[j] = -gpsp[j] + decay_next.b * gh_next[j];
            }

            // Drive adjoint toward the layer below (same timestep).
            for j in 0..fan_in {
                below[t][j] = gm[j] + gh[j];
            }

            gm_next = gm;
            gh_next = gh;
            gr_next = gr;
            decay_next = StepDecay::for_delta(record.deltas[t], p);
        }
        upper = below;
    }
    grads
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use crate::spiking::{run_network, NeuronParams, V0Mode, WeightInit};

    #[test]
    fn hard_forward_matches_run_network() {
        let mut rng = rng_from(17, "fwd-cross");
        let topo = NetworkTopology::random(
            &[5, 7, 3],
            &[true, false],
            WeightInit { mu: 0.0, sigma: 1.5 },
            &mut rng,
        )
        .unwrap();
        let params = vec![
            NeuronParams::new(20.0, 150.0, 20.0, 0.4, V0Mode::PaperFormula).unwrap(),
            NeuronParams::new(25.0, 140.0, 18.0, 0.4, V0Mode::PaperFormula).unwrap(),
        ];
        let initial: Vec<LayerState> = topo
            .weights
            .iter()
            .map(|w| LayerState::zeros(w.fan_in(), w.neurons(), w.is_recurrent()))
            .collect();
        let mut input = SpikeTensor::zeros(20, 5);
        for t in 0..20 {
            input.set(t, t % 5, 1);
            input.set(t, (t * 2) % 5, 1);
        }
        let record = forward(&input, &topo, &params, &initial, Activation::Hard, 5.0).unwrap();
        let (out, trace) = run_network(&input, &topo, &params, Some(&initial)).unwrap();
        for t in 0..20 {
            for i in 0..3 {
                assert_eq!(record.layers[1].o[t][i], out.get(t, i) as f64);
            }
            for l in 0..2 {
                assert_eq!(record.layers[l].v[t], trace.states[l][t].v_membrane);
                assert_eq!(record.layers[l].m[t], trace.states[l][t].m_trace);
            }
        }
        let counts = out.counts();
        for (a, b) in record.counts.iter().zip(&counts) {
            assert_eq!(*a, *b as f64);
        }
    }

    #[test]
    fn timestamped_forward_matches_event_driven_network() {
        let mut rng = rng_from(23, "fwd-event");
        let topo = NetworkTopology::random(
            &[3, 4],
            &[true],
            WeightInit { mu: 0.0, sigma: 1.0 },
            &mut rng,
        )
        .unwrap();
        let params =
            vec![NeuronParams::new(20.0, 150.0, 20.0, 0.3, V0Mode::PaperFormula).unwrap()];
        let initial: Vec<LayerState> = topo
            .weights
            .iter()
            .map(|w| LayerState::zeros(w.fan_in(), w.neurons(), w.is_recurrent()))
            .collect();
        let mut input = SpikeTensor::zeros(6, 3);
        for t in 0..6 {
            input.set(t, t % 3, 1);
        }
        let input = input
            .with_timestamps(Some(vec![0.0, 1.0, 3.5, 4.5, 8.0, 9.0]))
            .unwrap();
        let record = forward(&input, &topo, &params, &initial, Activation::Hard, 5.0).unwrap();
        let (_, trace) = run_network(&input, &topo, &params, Some(&initial)).unwrap();
        for t in 0..6 {
            assert_eq!(record.layers[0].v[t], trace.states[0][t].v_membrane);
            assert_eq!(record.layers[0].o[t], trace.states[0][t].o_output);
        }
    }
}
