//! Dense recurrent baseline: a tanh recurrent layer with a softmax head
//! over the mean-pooled hidden state, trained with the same SGD schedule
//! as the spiking model. Used for the curriculum contrast between spiking
//! and conventional recurrent networks, sized to parameter-match the
//! spiking classifier.

use serde::{Deserialize, Serialize};

use crate::curriculum::CurriculumSchedule;
use crate::data::{Dataset, TimeSeriesSample};
use crate::error::{Error, Result};
use crate::learning::{activity_from_counts, LossReport, OptimizerConfig};
use crate::linalg::Mat;
use crate::rng::rng_from;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseRecurrent {
    pub wx: Mat,
    pub wh: Mat,
    pub wo: Mat,
    pub seed: u64,
}

/// Hidden size whose parameter count best matches a budget of
/// `target_params` for input width `d` and `c` classes:
/// h^2 + h(d + c) ~= target.
pub fn parameter_matched_hidden(target_params: usize, d: usize, c: usize) -> usize {
    let b = (d + c) as f64;
    let t = target_params as f64;
    let h = (-b + (b * b + 4.0 * t).sqrt()) / 2.0;
    (h.round() as usize).max(2)
}

impl DenseRecurrent {
    pub fn new(input_dim: usize, hidden: usize, n_classes: usize, sigma: f64, seed: u64) -> Self {
        let mut rng = rng_from(seed, "baseline-weights");
        DenseRecurrent {
            wx: Mat::gaussian(hidden, input_dim, 0.0, sigma, &mut rng),
            wh: Mat::gaussian(hidden, hidden, 0.0, sigma / (hidden as f64).sqrt(), &mut rng),
            wo: Mat::gaussian(n_classes, hidden, 0.0, sigma, &mut rng),
            seed,
        }
    }

    pub fn hidden(&self) -> usize {
        self.wx.rows
    }

    pub fn n_classes(&self) -> usize {
        self.wo.rows
    }

    pub fn n_params(&self) -> usize {
        self.wx.data.len() + self.wh.data.len() + self.wo.data.len()
    }

    fn check_input(&self, sample: &TimeSeriesSample) -> Result<()> {
        if sample.dims != self.wx.cols {
            return Err(Error::DimensionMismatch {
                context: "baseline input",
                expected: self.wx.cols,
                actual: sample.dims,
            });
        }
        Ok(())
    }

    /// Forward pass: hidden trajectory and class probabilities.
    fn unroll(&self, sample: &TimeSeriesSample) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
        let h_dim = self.hidden();
        let t_len = sample.steps;
        let mut hs: Vec<Vec<f64>> = Vec::with_capacity(t_len);
        let mut prev = vec![0.0; h_dim];
        for t in 0..t_len {
            let x = &sample.values[t * sample.dims..(t + 1) * sample.dims];
            let mut pre = vec![0.0; h_dim];
            self.wx.matvec_add(x, 1.0, &mut pre);
            self.wh.matvec_add(&prev, 1.0, &mut pre);
            let h: Vec<f64> = pre.iter().map(|p| p.tanh()).collect();
            prev = h.clone();
            hs.push(h);
        }
        let mut pool = vec![0.0; h_dim];
        for h in &hs {
            for (p, v) in pool.iter_mut().zip(h) {
                *p += v;
            }
        }
        for p in &mut pool {
            *p /= t_len as f64;
        }
        let mut logits = vec![0.0; self.n_classes()];
        self.wo.matvec_add(&pool, 1.0, &mut logits);
        let probs = activity_from_counts(&logits);
        (hs, pool, probs)
    }

    pub fn predict(&self, sample: &TimeSeriesSample) -> Result<Vec<f64>> {
        self.check_input(sample)?;
        Ok(self.unroll(sample).2)
    }

    fn gradients(
        &self,
        sample: &TimeSeriesSample,
        label: usize,
    ) -> (f64, Mat, Mat, Mat) {
        let (hs, pool, probs) = self.unroll(sample);
        let t_len = sample.steps;
        let h_dim = self.hidden();
        let loss = -probs[label].ln();

        let mut dlogits = probs;
        dlogits[label] -= 1.0;
        let mut g_wo = Mat::zeros(self.n_classes(), h_dim);
        g_wo.outer_add(&dlogits, &pool, 1.0);
        let mut gpool = vec![0.0; h_dim];
        self.wo.matvec_t_add(&dlogits, 1.0, &mut gpool);

        let mut g_wx = Mat::zeros(h_dim, self.wx.cols);
        let mut g_wh = Mat::zeros(h_dim, h_dim);
        let mut carry = vec![0.0; h_dim];
        for t in (0..t_len).rev() {
            let mut gh: Vec<f64> = gpool.iter().map(|g| g / t_len as f64).collect();
            for (g, c) in gh.iter_mut().zip(&carry) {
                *g += c;
            }
            let gpre: Vec<f64> = gh
                .iter()
                .zip(&hs[t])
                .map(|(g, h)| g * (1.0 - h * h))
                .collect();
            let x = &sample.values[t * sample.dims..(t + 1) * sample.dims];
            g_wx.outer_add(&gpre, x, 1.0);
            let h_prev: Vec<f64> = if t == 0 {
                vec![0.0; h_dim]
            } else {
                hs[t - 1].clone()
            };
            g_wh.outer_add(&gpre, &h_prev, 1.0);
            carry.iter_mut().for_each(|c| *c = 0.0);
            self.wh.matvec_t_add(&gpre, 1.0, &mut carry);
        }
        (loss, g_wx, g_wh, g_wo)
    }
}

/// SGD trainer for the baseline, mirroring the spiking trainer's epoch and
/// curriculum semantics.
#[derive(Debug, Clone)]
pub struct BaselineTrainer {
    pub model: DenseRecurrent,
    pub opt: OptimizerConfig,
    pub global_step: usize,
}

impl BaselineTrainer {
    pub fn new(model: DenseRecurrent, opt: OptimizerConfig) -> Result<Self> {
        opt.validate()?;
        Ok(BaselineTrainer {
            model,
            opt,
            global_step: 0,
        })
    }

    pub fn train_epoch(
        &mut self,
        dataset: &Dataset,
        schedule: &CurriculumSchedule,
        epoch: usize,
    ) -> Result<(f64, LossReport)> {
        let n = dataset.len();
        let lr = self.opt.lr_at_epoch(epoch);
        let steps = n.div_ceil(self.opt.batch_size).max(1);
        let mut presented_total = 0.0;
        for _ in 0..steps {
            let limit = schedule.size_at(self.global_step).min(n);
            let batch = &schedule.order[..limit];
            let mut g_wx = Mat::zeros(self.model.wx.rows, self.model.wx.cols);
            let mut g_wh = Mat::zeros(self.model.wh.rows, self.model.wh.cols);
            let mut g_wo = Mat::zeros(self.model.wo.rows, self.model.wo.cols);
            let mut batch_loss = 0.0;
            for &idx in batch {
                let sample = &dataset.samples[idx];
                self.model.check_input(sample)?;
                let (loss, gx, gh, go) = self.model.gradients(sample, sample.label);
                batch_loss += loss;
                g_wx.add_scaled(&gx, 1.0);
                g_wh.add_scaled(&gh, 1.0);
                g_wo.add_scaled(&go, 1.0);
            }
            let scale = 1.0 / batch.len() as f64;
            if !(g_wx.is_finite() && g_wh.is_finite() && g_wo.is_finite()) {
                return Err(Error::NonFiniteGradient {
                    epoch,
                    step: self.global_step,
                });
            }
            presented_total += batch_loss * scale;
            if lr > 0.0 {
                self.model.wx.add_scaled(&g_wx, -lr * scale);
                self.model.wh.add_scaled(&g_wh, -lr * scale);
                self.model.wo.add_scaled(&g_wo, -lr * scale);
            }
            self.global_step += 1;
        }
        let report = evaluate_baseline(&self.model, dataset)?;
        Ok((presented_total / steps as f64, report))
    }
}

pub fn evaluate_baseline(model: &DenseRecurrent, dataset: &Dataset) -> Result<LossReport> {
    let mut report = LossReport::default();
    for sample in &dataset.samples {
        let probs = model.predict(sample)?;
        let loss = -probs[sample.label].ln();
        let predicted = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        report.per_sample_loss.push(loss);
        report.activity.push(probs[sample.label]);
        report.predicted_class.push(predicted);
        report.probabilities.push(probs);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curriculum::{build_schedule, score, CurriculumMode, PacingConfig};
    use crate::data::{generate_synthetic, SyntheticKind};

    #[test]
    fn parameter_match_solves_the_quadratic() {
        // Budget for h=20, d=1, c=2: 400 + 20*3 = 460.
        assert_eq!(parameter_matched_hidden(460, 1, 2), 20);
        let h = parameter_matched_hidden(10_000, 4, 3);
        let params = h * h + h * 7;
        assert!((params as i64 - 10_000).abs() < 300);
    }

    #[test]
    fn baseline_gradients_match_finite_differences() {
        let sample = TimeSeriesSample::univariate(
            (0..12).map(|t| ((t as f64) * 0.7).sin()).collect(),
            1,
        )
        .unwrap();
        let mut model = DenseRecurrent::new(1, 5, 2, 0.6, 3);
        let (_, gx, gh, go) = model.gradients(&sample, 1);
        let h = 1e-6;
        let mut max_rel = 0.0f64;
        for (block, grad) in [(0, &gx), (1, &gh), (2, &go)] {
            let len = grad.data.len();
            for idx in 0..len {
                let read = |m: &DenseRecurrent| match block {
                    0 => m.wx.data[idx],
                    1 => m.wh.data[idx],
                    _ => m.wo.data[idx],
                };
                let write = |m: &mut DenseRecurrent, v: f64| match block {
                    0 => m.wx.data[idx] = v,
                    1 => m.wh.data[idx] = v,
                    _ => m.wo.data[idx] = v,
                };
                let orig = read(&model);
                write(&mut model, orig + h);
                let plus = -model.predict(&sample).unwrap()[1].ln();
                write(&mut model, orig - h);
                let minus = -model.predict(&sample).unwrap()[1].ln();
                write(&mut model, orig);
                let fd = (plus - minus) / (2.0 * h);
                let denom = grad.data[idx].abs().max(fd.abs()).max(1e-6);
                max_rel = max_rel.max((grad.data[idx] - fd).abs() / denom);
            }
        }
        assert!(max_rel < 1e-4, "max rel {max_rel}");
    }

    #[test]
    fn baseline_learns_the_frequency_task() {
        let dataset = generate_synthetic(SyntheticKind::two_class_freq(0.02), 10, 32, 5).unwrap();
        let dataset = crate::data::MinMaxNorm::fit(&dataset).unwrap().apply(&dataset);
        let model = DenseRecurrent::new(1, 12, 2, 0.5, 7);
        let opt = OptimizerConfig {
            learning_rate: 0.5,
            lr_decay_every: 0,
            batch_size: 5,
            ..OptimizerConfig::default()
        };
        let mut trainer = BaselineTrainer::new(model, opt).unwrap();
        let scores = score(&vec![0.0; dataset.len()]).unwrap();
        let pacing = PacingConfig::new(1.0, 1, dataset.len()).unwrap();
        let schedule = build_schedule(&scores, CurriculumMode::Random, &pacing, 3).unwrap();
        let mut first = f64::NAN;
        let mut last = f64::NAN;
        for epoch in 0..30 {
            let (_, report) = trainer.train_epoch(&dataset, &schedule, epoch).unwrap();
            if epoch == 0 {
                first = report.mean_loss();
            }
            last = report.mean_loss();
        }
        assert!(
            last < first * 0.6,
            "baseline failed to learn: first {first}, last {last}"
        );
    }
}
