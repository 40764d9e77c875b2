//! Finite-difference verification of the BPTT machinery. The step
//! nonlinearity is replaced by the same sigmoid in the forward pass, which
//! makes the loss a smooth function of the weights; central differences
//! over every weight then provide an implementation-independent gradient
//! oracle. The spiking path itself cannot be difference-checked (the step
//! function has measure-zero sensitivity), so this isolates the unrolled
//! credit assignment through the M/H/R traces.

use super::bptt::{backward, forward, Activation};
use super::loss_from_counts;
use crate::error::Result;
use crate::rng::rng_from;
use crate::spiking::{
    LayerState, NetworkTopology, NeuronParams, SpikeTensor, V0Mode, WeightInit,
};

pub struct GradCheckReport {
    pub max_relative_error: f64,
    pub n_parameters: usize,
}

/// Run the 2-layer, 10-step smoothed-network gradient check.
pub fn gradient_check(seed: u64) -> Result<GradCheckReport> {
    let slope = 5.0;
    let mut rng = rng_from(seed, "gradcheck-weights");
    let mut topology = NetworkTopology::random(
        &[3, 4, 2],
        &[true, false],
        WeightInit { mu: 0.0, sigma: 6.0 },
        &mut rng,
    )?;
    // Low threshold keeps the membrane near the sigmoid's responsive range
    // so the check runs where gradients are well above roundoff.
    let params = vec![
        NeuronParams::new(20.0, 150.0, 20.0, 0.25, V0Mode::PaperFormula)?,
        NeuronParams::new(18.0, 140.0, 22.0, 0.25, V0Mode::PaperFormula)?,
    ];
    let initial: Vec<LayerState> = topology
        .weights
        .iter()
        .map(|w| {
            let mut s = LayerState::zeros(w.fan_in(), w.neurons(), w.is_recurrent());
            // A touch of initial output so the recurrent path carries
            // gradient from the very first step.
            s.o_output.iter_mut().step_by(2).for_each(|o| *o = 1.0);
            s
        })
        .collect();

    let mut input = SpikeTensor::zeros(10, 3);
    for t in 0..10 {
        input.set(t, t % 3, 1);
        if t % 2 == 0 {
            input.set(t, (t + 1) % 3, 1);
        }
    }
    let label = 0usize;

    let loss_of = |topo: &NetworkTopology| -> Result<f64> {
        let record = forward(&input, topo, &params, &initial, Activation::Smoothed, slope)?;
        Ok(loss_from_counts(&record.counts, label).0)
    };

    // Analytic gradients.
    let record = forward(
        &input,
        &topology,
        &params,
        &initial,
        Activation::Smoothed,
        slope,
    )?;
    let (_, probs) = loss_from_counts(&record.counts, label);
    let mut count_grads = probs;
    count_grads[label] -= 1.0;
    let grads = backward(&record, &topology, &params, &count_grads, slope, None);

    // Central differences over every weight entry.
    fn weight_mut(topo: &mut NetworkTopology, l: usize, is_rec: bool, idx: usize) -> &mut f64 {
        if is_rec {
            &mut topo.weights[l].rec.as_mut().unwrap().data[idx]
        } else {
            &mut topo.weights[l].ff.data[idx]
        }
    }

    let h = 1e-5;
    let mut max_rel = 0.0f64;
    let mut n_parameters = 0usize;
    for l in 0..topology.weights.len() {
        let blocks: &[bool] = if topology.weights[l].rec.is_some() {
            &[false, true]
        } else {
            &[false]
        };
        for &is_rec in blocks {
            let len = if is_rec {
                topology.weights[l].rec.as_ref().unwrap().data.len()
            } else {
                topology.weights[l].ff.data.len()
            };
            for idx in 0..len {
                let original = *weight_mut(&mut topology, l, is_rec, idx);
                *weight_mut(&mut topology, l, is_rec, idx) = original + h;
                let plus = loss_of(&topology)?;
                *weight_mut(&mut topology, l, is_rec, idx) = original - h;
                let minus = loss_of(&topology)?;
                *weight_mut(&mut topology, l, is_rec, idx) = original;
                let fd = (plus - minus) / (2.0 * h);
                let analytic = if is_rec {
                    grads.rec[l].as_ref().unwrap().data[idx]
                } else {
                    grads.ff[l].data[idx]
                };
                let denom = analytic.abs().max(fd.abs()).max(1e-8);
                max_rel = max_rel.max((analytic - fd).abs() / denom);
                n_parameters += 1;
            }
        }
    }
    Ok(GradCheckReport {
        max_relative_error: max_rel,
        n_parameters,
    })
}

