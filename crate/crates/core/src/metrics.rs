//! Classification and activity metrics: rank-based AUC-ROC with tie
//! handling, firing statistics (average firing probability and sparsity),
//! a paired one-sided sign test, and a least-squares linearity fit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spiking::NetworkTrace;

/// Binary AUC-ROC by the rank statistic with average ranks for ties:
/// AUC = (R_pos - P(P+1)/2) / (P * N).
pub fn auc_roc_binary(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            context: "auc inputs",
            expected: scores.len(),
            actual: labels.len(),
        });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Metric(
            "AUC needs at least one positive and one negative sample".into(),
        ));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Metric("AUC scores must be finite".into()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());

    // Average ranks over tie groups (1-based ranks).
    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    let p = pos as f64;
    let n = neg as f64;
    Ok((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n))
}

/// Multiclass macro AUC: one-vs-rest per class on that class's probability
/// column, averaged over classes that have both positives and negatives.
pub fn auc_roc_multiclass(probs: &[Vec<f64>], labels: &[usize], n_classes: usize) -> Result<f64> {
    if probs.len() != labels.len() || probs.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "auc inputs",
            expected: probs.len().max(1),
            actual: labels.len(),
        });
    }
    if n_classes < 2 {
        return Err(Error::Metric("AUC needs at least two classes".into()));
    }
    if labels.iter().collect::<std::collections::BTreeSet<_>>().len() < 2 {
        return Err(Error::Metric(
            "AUC needs at least one positive and one negative sample".into(),
        ));
    }
    if n_classes == 2 {
        let scores: Vec<f64> = probs.iter().map(|p| p[1]).collect();
        let bin: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        return auc_roc_binary(&scores, &bin);
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    for c in 0..n_classes {
        let bin: Vec<bool> = labels.iter().map(|&l| l == c).collect();
        if bin.iter().all(|&b| b) || bin.iter().all(|&b| !b) {
            continue;
        }
        let scores: Vec<f64> = probs.iter().map(|p| p[c]).collect();
        total += auc_roc_binary(&scores, &bin)?;
        counted += 1;
    }
    Ok(total / counted as f64)
}

/// Normal-approximation confidence interval for an AUC (Hanley-McNeil
/// standard error), clamped to [0, 1].
pub fn auc_confidence_interval(auc: f64, pos: usize, neg: usize) -> (f64, f64) {
    let a = auc;
    let p = pos as f64;
    let n = neg as f64;
    let q1 = a / (2.0 - a);
    let q2 = 2.0 * a * a / (1.0 + a);
    let var =
        (a * (1.0 - a) + (p - 1.0) * (q1 - a * a) + (n - 1.0) * (q2 - a * a)) / (p * n);
    let se = var.max(0.0).sqrt();
    ((a - 1.96 * se).max(0.0), (a + 1.96 * se).min(1.0))
}

/// Firing statistics over an evaluation pass. The headline numbers cover
/// hidden layers only (non-input, non-output); per-layer vectors cover
/// every spiking layer including the output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FiringStats {
    /// Average firing probability per timestep per neuron.
    pub afp: f64,
    /// Fraction of hidden neurons that never fired.
    pub sparsity_ratio: f64,
    pub per_layer_afp: Vec<f64>,
    pub per_layer_sparsity: Vec<f64>,
}

/// Accumulates spike counts across samples to produce [`FiringStats`].
#[derive(Debug, Clone, Default)]
pub struct FiringAccumulator {
    /// Per layer: per neuron total spikes.
    neuron_spikes: Vec<Vec<f64>>,
    /// Per layer: total (steps * samples) observed.
    observations: Vec<f64>,
}

impl FiringAccumulator {
    /// Record one layer's outputs over the steps of a sample.
    pub fn record_layer_steps(&mut self, layer: usize, step_outputs: &[Vec<f64>]) {
        if step_outputs.is_empty() {
            return;
        }
        if self.neuron_spikes.len() <= layer {
            self.neuron_spikes.resize(layer + 1, Vec::new());
            self.observations.resize(layer + 1, 0.0);
        }
        let n = step_outputs[0].len();
        if self.neuron_spikes[layer].len() < n {
            self.neuron_spikes[layer].resize(n, 0.0);
        }
        for outputs in step_outputs {
            for (acc, &o) in self.neuron_spikes[layer].iter_mut().zip(outputs) {
                *acc += o;
            }
        }
        self.observations[layer] += step_outputs.len() as f64;
    }

    pub fn record(&mut self, trace: &NetworkTrace) {
        for (l, states) in trace.states.iter().enumerate() {
            let outputs: Vec<Vec<f64>> = states.iter().map(|s| s.o_output.clone()).collect();
            self.record_layer_steps(l, &outputs);
        }
    }

    /// Finalize. Layers `0..last` are hidden; the last layer is the output.
    pub fn finish(&self) -> FiringStats {
        let n_layers = self.neuron_spikes.len();
        let mut per_layer_afp = Vec::with_capacity(n_layers);
        let mut per_layer_sparsity = Vec::with_capacity(n_layers);
        for l in 0..n_layers {
            let neurons = self.neuron_spikes[l].len();
            let obs = self.observations[l];
            if neurons == 0 || obs == 0.0 {
                per_layer_afp.push(0.0);
                per_layer_sparsity.push(0.0);
                continue;
            }
            let total: f64 = self.neuron_spikes[l].iter().sum();
            per_layer_afp.push(total / (obs * neurons as f64));
            let silent = self.neuron_spikes[l].iter().filter(|&&s| s == 0.0).count();
            per_layer_sparsity.push(silent as f64 / neurons as f64);
        }

        // Headline stats over hidden layers only.
        let hidden = n_layers.saturating_sub(1);
        let mut afp = 0.0;
        let mut sparsity = 0.0;
        if hidden > 0 {
            let mut spikes = 0.0;
            let mut weight = 0.0;
            let mut silent = 0usize;
            let mut neurons = 0usize;
            for l in 0..hidden {
                spikes += self.neuron_spikes[l].iter().sum::<f64>();
                weight += self.observations[l] * self.neuron_spikes[l].len() as f64;
                silent += self.neuron_spikes[l].iter().filter(|&&s| s == 0.0).count();
                neurons += self.neuron_spikes[l].len();
            }
            if weight > 0.0 {
                afp = spikes / weight;
            }
            if neurons > 0 {
                sparsity = silent as f64 / neurons as f64;
            }
        }
        FiringStats {
            afp,
            sparsity_ratio: sparsity,
            per_layer_afp,
            per_layer_sparsity,
        }
    }
}

/// One-sided paired sign test. Returns (wins, losses, p-value) where the
/// p-value is P(X >= wins) under Binomial(wins+losses, 1/2); ties drop.
pub fn sign_test(diffs: &[f64]) -> (usize, usize, f64) {
    let wins = diffs.iter().filter(|&&d| d > 0.0).count();
    let losses = diffs.iter().filter(|&&d| d < 0.0).count();
    let n = wins + losses;
    if n == 0 {
        return (0, 0, 1.0);
    }
    let p_value: f64 = (wins..=n).map(|k| binomial_pmf(n, k)).sum();
    (wins, losses, p_value.min(1.0))
}

fn binomial_pmf(n: usize, k: usize) -> f64 {
    // n is small (seed counts); direct product form keeps this exact enough.
    let mut log_c = 0.0f64;
    for i in 0..k {
        log_c += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
    }
    (log_c + (n as f64) * 0.5f64.ln()).exp()
}

/// Least-squares line fit returning (slope, intercept, r_squared).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument {
            name: "xs",
            message: "need at least two points of equal length".into(),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Metric("degenerate x values in linear fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok((slope, intercept, r2))
}
