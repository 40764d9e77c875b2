//! Fixed desk-scale benchmark protocols for the training-order studies:
//! a two-class shape task with heavily corrupted training samples for the
//! order-direction comparison, and a 20 dB perturbation protocol measuring
//! how training order changes the noise impact on final training loss.

use serde::{Deserialize, Serialize};

use super::{
    auc_for_report, build_fold_encoder, fold_pacing, stratified_folds, synthetic_activity,
    train_fold, FoldSpec,
};
use crate::config::RunConfig;
use crate::curriculum::CurriculumMode;
use crate::data::{generate_synthetic, inject_noise, Dataset, SyntheticKind};
use crate::encoding::encode_dataset;
use crate::error::Result;
use crate::learning::{evaluate_encoded, EncodedDataset, SpikingClassifier, Trainer};
use crate::metrics::{sign_test, FiringStats};
use crate::rng::derive_seed;

/// Two well-separated shape classes (plateau vs rising ramp) drawn from the
/// three-class generator.
pub fn two_class_shapes(seed: u64, n_per_class: usize) -> Result<Dataset> {
    let full = generate_synthetic(SyntheticKind::cbf_like(0.05), n_per_class, 128, seed)?;
    let samples: Vec<_> = full.samples.into_iter().filter(|s| s.label < 2).collect();
    Dataset::new(samples, 2, "shapes-2c")
}

/// Configuration shared by the order benchmarks: default architecture,
/// constant learning rate, pacing from 20% with short steps.
pub fn order_benchmark_config() -> RunConfig {
    let mut config = RunConfig::default();
    config.optimizer.lr_decay_every = 0;
    config.optimizer.epochs = 20;
    config.optimizer.batch_size = 8;
    config.curriculum.start_percent = 0.2;
    config.curriculum.step_length = 10;
    config.run.eval_every = 0;
    config
}

/// Train one model on a (possibly corrupted) training set and report the
/// clean-test AUC, final training-set loss, per-sample activity, and
/// firing statistics.
pub struct BenchRun {
    pub auc: f64,
    pub final_train_loss: f64,
    pub activity: Vec<f64>,
    pub firing: FiringStats,
}

pub fn train_and_score(
    config: &RunConfig,
    train_set: &Dataset,
    test_set: Option<&Dataset>,
    mode: CurriculumMode,
    seed: u64,
) -> Result<BenchRun> {
    let (norm, encoder) = build_fold_encoder(train_set, config)?;
    let train = EncodedDataset {
        tensors: encode_dataset(&norm.apply(train_set), &encoder)?,
        labels: train_set.labels(),
        n_classes: train_set.n_classes,
    };
    let run_seed = derive_seed(seed, "order-benchmark");
    let mut model_config = config.model.clone();
    model_config.seed = run_seed;
    let model = SpikingClassifier::build(
        encoder.clone(),
        train_set.n_classes,
        &model_config,
        config.optimizer.learning_rate,
    )?;
    let trainer = Trainer::new(model, config.optimizer)?;
    let spec = FoldSpec {
        train: &train,
        test: None,
        mode,
        pacing: fold_pacing(config, train.len())?,
        warmup_epochs: config.curriculum.warmup_epochs,
        eval_every: 0,
        run_seed,
        refresh_scores: true,
    };
    let outcome = train_fold(trainer, &spec)?;
    let (train_report, firing) =
        evaluate_encoded(&outcome.trainer.model, &train, config.optimizer.surrogate_slope)?;
    let auc = match test_set {
        Some(test_set) => {
            let test = EncodedDataset {
                tensors: encode_dataset(&norm.apply(test_set), &encoder)?,
                labels: test_set.labels(),
                n_classes: test_set.n_classes,
            };
            let (report, _) =
                evaluate_encoded(&outcome.trainer.model, &test, config.optimizer.surrogate_slope)?;
            auc_for_report(&report, &test)?
        }
        None => f64::NAN,
    };
    Ok(BenchRun {
        auc,
        final_train_loss: train_report.mean_loss(),
        activity: train_report.activity.clone(),
        firing,
    })
}

/// Outcome of the order-direction study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderDirectionReport {
    pub mean_auc_a2d: f64,
    pub mean_auc_random: f64,
    pub mean_auc_d2a: f64,
    /// Paired sign test over all strict order-induced differences
    /// (active-first vs random and active-first vs dormant-first pooled).
    pub pooled_wins: usize,
    pub pooled_losses: usize,
    pub pooled_p: f64,
    /// Sign test of active-first vs random alone.
    pub vs_random: (usize, usize, f64),
    /// Sign test of active-first vs dormant-first (the anti-curriculum).
    pub vs_d2a: (usize, usize, f64),
    pub per_seed: Vec<(f64, f64, f64)>,
    /// Mean hidden-layer AFP of the active-first runs.
    pub mean_afp_a2d: f64,
}

/// The order-direction benchmark: per seed, corrupt 40% of a training
/// split with heavy (-6 dB) noise, train under the three orders, and
/// measure AUC on the untouched test split. Reports seed-paired means and
/// a pooled one-sided sign test.
pub fn order_direction_study(n_seeds: u64, jobs: usize) -> Result<OrderDirectionReport> {
    let config = order_benchmark_config();
    let per_seed_results = super::run_parallel(n_seeds as usize, jobs, |s| {
        let seed = s as u64;
        let data = two_class_shapes(derive_seed(seed, "b"), 20)?;
        let folds = stratified_folds(&data, 2, derive_seed(seed, "split"));
        let (tr, te) = &folds[0];
        let clean_train = Dataset::new(
            tr.iter().map(|&i| data.samples[i].clone()).collect(),
            2,
            "train",
        )?;
        let test_set = Dataset::new(
            te.iter().map(|&i| data.samples[i].clone()).collect(),
            2,
            "test",
        )?;
        let activity = synthetic_activity(clean_train.len(), derive_seed(seed, "p"));
        let train_set = inject_noise(
            &clean_train,
            0.4,
            -6.0,
            &activity.scores,
            derive_seed(seed, "n"),
        )?;
        let a2d = train_and_score(&config, &train_set, Some(&test_set), CurriculumMode::A2D, seed)?;
        let rnd =
            train_and_score(&config, &train_set, Some(&test_set), CurriculumMode::Random, seed)?;
        let d2a = train_and_score(&config, &train_set, Some(&test_set), CurriculumMode::D2A, seed)?;
        Ok((a2d, rnd, d2a))
    })?;

    let per_seed: Vec<(f64, f64, f64)> = per_seed_results
        .iter()
        .map(|(a, r, d)| (a.auc, r.auc, d.auc))
        .collect();
    let n = per_seed.len() as f64;
    let mean_auc_a2d = per_seed.iter().map(|x| x.0).sum::<f64>() / n;
    let mean_auc_random = per_seed.iter().map(|x| x.1).sum::<f64>() / n;
    let mean_auc_d2a = per_seed.iter().map(|x| x.2).sum::<f64>() / n;
    let pooled: Vec<f64> = per_seed
        .iter()
        .flat_map(|&(a, r, d)| [a - r, a - d])
        .collect();
    let (pooled_wins, pooled_losses, pooled_p) = sign_test(&pooled);
    let diffs_random: Vec<f64> = per_seed.iter().map(|&(a, r, _)| a - r).collect();
    let diffs_d2a: Vec<f64> = per_seed.iter().map(|&(a, _, d)| a - d).collect();
    let vs_random = sign_test(&diffs_random);
    let vs_d2a = sign_test(&diffs_d2a);
    let mean_afp_a2d = per_seed_results.iter().map(|(a, _, _)| a.firing.afp).sum::<f64>() / n;
    Ok(OrderDirectionReport {
        mean_auc_a2d,
        mean_auc_random,
        mean_auc_d2a,
        pooled_wins,
        pooled_losses,
        pooled_p,
        vs_random,
        vs_d2a,
        per_seed,
        mean_afp_a2d,
    })
}

/// Outcome of the 20 dB noise-impact study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseImpactReport {
    /// Per seed: loss increase under active-first and under random order.
    pub increases: Vec<(f64, f64)>,
    /// Seeds where the active-first increase did not exceed the random one.
    pub favorable: usize,
    pub seeds: usize,
}

/// The 20 dB noise-impact protocol: per seed, train on the clean set under
/// both orders, perturb the 20% most active samples (activity taken from
/// the trained active-first model) at 20 dB SNR, retrain from scratch, and
/// compare the increase in final training-set loss.
pub fn noise_impact_study(n_seeds: u64, jobs: usize) -> Result<NoiseImpactReport> {
    let mut config = order_benchmark_config();
    config.optimizer.epochs = 16;
    // Pacing that never saturates: training always concentrates on the
    // currently most active three quarters.
    config.curriculum.start_percent = 0.75;
    config.curriculum.step_length = 1000;

    let increases = super::run_parallel(n_seeds as usize, jobs, |s| {
        let seed = s as u64;
        let clean = two_class_shapes(derive_seed(seed, "b"), 20)?;
        let a2d_clean = train_and_score(&config, &clean, None, CurriculumMode::A2D, seed)?;
        let rnd_clean = train_and_score(&config, &clean, None, CurriculumMode::Random, seed)?;
        let noisy = inject_noise(&clean, 0.2, 20.0, &a2d_clean.activity, derive_seed(seed, "n"))?;
        let a2d_noisy = train_and_score(&config, &noisy, None, CurriculumMode::A2D, seed)?;
        let rnd_noisy = train_and_score(&config, &noisy, None, CurriculumMode::Random, seed)?;
        Ok((
            a2d_noisy.final_train_loss - a2d_clean.final_train_loss,
            rnd_noisy.final_train_loss - rnd_clean.final_train_loss,
        ))
    })?;
    let favorable = increases.iter().filter(|(a, r)| a <= r).count();
    Ok(NoiseImpactReport {
        favorable,
        seeds: increases.len(),
        increases,
    })
}
