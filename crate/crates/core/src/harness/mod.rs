//! Experiment orchestration: stratified k-fold cross-validation, the
//! curriculum training loop with per-epoch score refresh, training-order
//! comparisons against the dense recurrent baseline, the firing-rate
//! linearity study, and CSV/JSON artifact emission.

mod artifacts;
mod benchmarks;
mod firing_study;

pub use artifacts::{write_loss_curve_csv, write_results_csv, write_summary_json};
pub use benchmarks::{
    noise_impact_study, order_benchmark_config, order_direction_study, train_and_score, BenchRun,
    NoiseImpactReport, OrderDirectionReport, two_class_shapes,
};
pub use firing_study::{firing_rate_study, FiringStudyConfig, FiringStudyReport};

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::baseline::{evaluate_baseline, BaselineTrainer, DenseRecurrent};
use crate::config::RunConfig;
use crate::curriculum::{build_schedule, score, CurriculumMode, PacingConfig, ScoreVector};
use crate::data::{Dataset, MinMaxNorm};
use crate::encoding::{encode_dataset, fit_partition, EncoderConfig, EncoderMode};
use crate::error::{Error, Result};
use crate::learning::{
    evaluate_encoded, EncodedDataset, LossReport, SpikingClassifier, Trainer,
};
use crate::metrics::{
    auc_confidence_interval, auc_roc_multiclass, sign_test, FiringStats,
};
use crate::rng::{derive_seed, rng_from};

/// One (fold, seed, mode) training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub fold: usize,
    pub seed: u64,
    pub mode: CurriculumMode,
    pub auc: f64,
    pub auc_ci: (f64, f64),
    /// Best test AUC seen at any evaluation point during training.
    pub best_auc: f64,
    /// Epoch at which `best_auc` was first reached.
    pub best_auc_epoch: usize,
    pub firing: FiringStats,
    /// Mean loss over the batches presented each epoch.
    pub presented_loss_curve: Vec<f64>,
    /// Full-training-set evaluation loss after each epoch.
    pub train_loss_curve: Vec<f64>,
    /// Hidden-layer AFP after each epoch.
    pub afp_curve: Vec<f64>,
    pub end_epoch: usize,
    pub seconds: f64,
}

/// Aggregated experiment outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset: String,
    pub mode: CurriculumMode,
    pub seed: u64,
    pub auc: f64,
    pub auc_std: f64,
    pub auc_ci: (f64, f64),
    /// Mean full-train evaluation loss per epoch, averaged over folds.
    pub loss_curve: Vec<f64>,
    pub firing: FiringStats,
    pub runs: Vec<RunResult>,
    pub seconds: f64,
    /// Resolved configuration, flattened to section.key = value.
    pub config: BTreeMap<String, String>,
}

impl ExperimentReport {
    /// Equality of the scientific content, ignoring wall-clock fields.
    pub fn science_eq(&self, other: &ExperimentReport) -> bool {
        self.auc == other.auc
            && self.auc_std == other.auc_std
            && self.loss_curve == other.loss_curve
            && self.firing == other.firing
            && self.runs.len() == other.runs.len()
            && self
                .runs
                .iter()
                .zip(&other.runs)
                .all(|(a, b)| {
                    a.auc == b.auc
                        && a.train_loss_curve == b.train_loss_curve
                        && a.presented_loss_curve == b.presented_loss_curve
                        && a.firing == b.firing
                })
    }
}

/// Stratified k-fold split: per-class round-robin assignment after a
/// seeded shuffle. `folds == 1` trains and tests on the full set.
pub fn stratified_folds(dataset: &Dataset, folds: usize, seed: u64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = dataset.len();
    if folds <= 1 {
        let all: Vec<usize> = (0..n).collect();
        return vec![(all.clone(), all)];
    }
    let mut fold_of = vec![0usize; n];
    let mut rng = rng_from(seed, "fold-split");
    let mut by_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in dataset.samples.iter().enumerate() {
        by_class.entry(s.label).or_default().push(i);
    }
    for (_, mut indices) in by_class {
        indices.shuffle(&mut rng);
        for (pos, idx) in indices.into_iter().enumerate() {
            fold_of[idx] = pos % folds;
        }
    }
    (0..folds)
        .map(|f| {
            let train: Vec<usize> = (0..n).filter(|&i| fold_of[i] != f).collect();
            let test: Vec<usize> = (0..n).filter(|&i| fold_of[i] == f).collect();
            (train, test)
        })
        .collect()
}

fn subset(dataset: &Dataset, indices: &[usize]) -> Dataset {
    Dataset {
        samples: indices.iter().map(|&i| dataset.samples[i].clone()).collect(),
        n_classes: dataset.n_classes,
        name: dataset.name.clone(),
    }
}

/// Build the encoder for a training fold: fit normalization and (for
/// regional mode) the value partition on the training split only.
pub fn build_fold_encoder(train: &Dataset, config: &RunConfig) -> Result<(MinMaxNorm, EncoderConfig)> {
    let norm = MinMaxNorm::fit(train)?;
    let normalized = norm.apply(train);
    let encoder = match config.encoder.mode {
        EncoderMode::Regional => {
            let partition = fit_partition(
                &normalized,
                config.encoder.m_intervals,
                config.encoder.cluster_size,
            )?;
            EncoderConfig::regional(partition, config.encoder.gain)?
        }
        EncoderMode::Population => EncoderConfig::population(
            config.encoder.m_intervals * config.encoder.cluster_size,
            0.0,
            1.0,
            config.encoder.gain,
        )?,
    };
    Ok((norm, encoder))
}

fn encode_split(dataset: &Dataset, norm: &MinMaxNorm, encoder: &EncoderConfig) -> Result<EncodedDataset> {
    let normalized = norm.apply(dataset);
    Ok(EncodedDataset {
        tensors: encode_dataset(&normalized, encoder)?,
        labels: normalized.labels(),
        n_classes: normalized.n_classes,
    })
}

/// Per-epoch curriculum training of one spiking model over one fold.
/// Warm-up epochs run in random order to obtain initial losses; from then
/// on scores are recomputed from the latest per-sample losses every epoch.
pub struct FoldTraining {
    pub trainer: Trainer,
    pub presented_loss_curve: Vec<f64>,
    pub train_loss_curve: Vec<f64>,
    pub afp_curve: Vec<f64>,
    pub test_auc_curve: Vec<(usize, f64)>,
    pub best_auc: f64,
    pub best_auc_epoch: usize,
}

pub struct FoldSpec<'a> {
    pub train: &'a EncodedDataset,
    pub test: Option<&'a EncodedDataset>,
    pub mode: CurriculumMode,
    pub pacing: PacingConfig,
    pub warmup_epochs: usize,
    pub eval_every: usize,
    pub run_seed: u64,
    /// Recompute scores from the latest losses every epoch (the default);
    /// when false the ordering freezes after the warm-up losses.
    pub refresh_scores: bool,
}

pub fn train_fold(mut trainer: Trainer, spec: &FoldSpec) -> Result<FoldTraining> {
    let epochs = trainer.opt.epochs;
    let mut presented_loss_curve = Vec::with_capacity(epochs);
    let mut train_loss_curve = Vec::with_capacity(epochs);
    let mut afp_curve = Vec::with_capacity(epochs);
    let mut test_auc_curve = Vec::new();
    let mut best_auc = f64::NAN;
    let mut best_auc_epoch = 0;
    let n = spec.train.len();
    let mut latest_losses: Vec<f64> = vec![0.0; n];
    let mut frozen_losses: Option<Vec<f64>> = None;

    for epoch in 0..epochs {
        if !spec.refresh_scores && epoch == spec.warmup_epochs && frozen_losses.is_none() {
            frozen_losses = Some(latest_losses.clone());
        }
        let scores = match &frozen_losses {
            Some(losses) => score(losses)?,
            None => score(&latest_losses)?,
        };
        let mode = if epoch < spec.warmup_epochs {
            CurriculumMode::Random
        } else {
            spec.mode
        };
        let schedule_seed = derive_seed(spec.run_seed, &format!("schedule-{epoch}"));
        let schedule = build_schedule(&scores, mode, &spec.pacing, schedule_seed)?;
        let outcome = trainer.train_epoch(spec.train, &schedule, epoch)?;
        latest_losses = outcome.train_report.per_sample_loss.clone();
        presented_loss_curve.push(outcome.presented_loss);
        train_loss_curve.push(outcome.train_report.mean_loss());
        afp_curve.push(outcome.firing.afp);

        let is_eval_epoch = spec.eval_every > 0
            && ((epoch + 1) % spec.eval_every == 0 || epoch + 1 == epochs);
        if is_eval_epoch {
            if let Some(test) = spec.test {
                let (report, _) = evaluate_encoded(&trainer.model, test, trainer.opt.surrogate_slope)?;
                let auc = auc_for_report(&report, test)?;
                test_auc_curve.push((epoch, auc));
                if best_auc.is_nan() || auc > best_auc {
                    best_auc = auc;
                    best_auc_epoch = epoch;
                }
            }
        }
    }
    Ok(FoldTraining {
        trainer,
        presented_loss_curve,
        train_loss_curve,
        afp_curve,
        test_auc_curve,
        best_auc,
        best_auc_epoch,
    })
}

pub fn auc_for_report(report: &LossReport, data: &EncodedDataset) -> Result<f64> {
    auc_roc_multiclass(&report.probabilities, &data.labels, data.n_classes)
}

/// Pacing for a fold of `n` samples: the configured start percent, raised
/// to 1/n when the fold is too small for it to cover a single sample.
pub fn fold_pacing(config: &RunConfig, n: usize) -> Result<PacingConfig> {
    let sp = config.curriculum.start_percent.max(1.0 / n.max(1) as f64);
    PacingConfig::new(sp, config.curriculum.step_length, n)
}

/// Run one curriculum experiment: per-fold training, aggregate AUC
/// statistics, and firing stats from the test passes.
pub fn run_experiment(dataset: &Dataset, config: &RunConfig) -> Result<ExperimentReport> {
    run_experiment_with_mode(dataset, config, config.curriculum.mode, config.run.seed)
}

pub fn run_experiment_with_mode(
    dataset: &Dataset,
    config: &RunConfig,
    mode: CurriculumMode,
    seed: u64,
) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let folds = stratified_folds(dataset, config.run.folds, derive_seed(seed, "folds"));

    let run_one = |fold_idx: usize| -> Result<RunResult> {
        let fold_start = Instant::now();
        let (train_idx, test_idx) = &folds[fold_idx];
        let train_set = subset(dataset, train_idx);
        let test_set = subset(dataset, test_idx);
        let (norm, encoder) = build_fold_encoder(&train_set, config)?;
        let train = encode_split(&train_set, &norm, &encoder)?;
        let test = encode_split(&test_set, &norm, &encoder)?;

        let run_seed = derive_seed(seed, &format!("fold-{fold_idx}"));
        let mut model_config = config.model.clone();
        model_config.seed = run_seed;
        let model = SpikingClassifier::build(
            encoder,
            dataset.n_classes,
            &model_config,
            config.optimizer.learning_rate,
        )?;
        let mut opt = config.optimizer;
        opt.seed = run_seed;
        let trainer = Trainer::new(model, opt)?;
        let pacing = fold_pacing(config, train.len())?;
        let spec = FoldSpec {
            train: &train,
            test: Some(&test),
            mode,
            pacing,
            warmup_epochs: config.curriculum.warmup_epochs,
            eval_every: config.run.eval_every,
            run_seed,
            refresh_scores: true,
        };
        let outcome = train_fold(trainer, &spec)?;

        let (test_report, firing) =
            evaluate_encoded(&outcome.trainer.model, &test, config.optimizer.surrogate_slope)?;
        let auc = if config.optimizer.epochs == 0 || spec.eval_every == 0 {
            auc_for_report(&test_report, &test)?
        } else {
            outcome
                .test_auc_curve
                .last()
                .map(|&(_, a)| a)
                .unwrap_or(auc_for_report(&test_report, &test)?)
        };
        let positives = test.labels.iter().filter(|&&l| l == 1).count().max(1);
        let negatives = (test.len() - positives).max(1);
        let best_auc = if outcome.best_auc.is_nan() { auc } else { outcome.best_auc };
        Ok(RunResult {
            fold: fold_idx,
            seed,
            mode,
            auc,
            auc_ci: auc_confidence_interval(auc, positives, negatives),
            best_auc,
            best_auc_epoch: outcome.best_auc_epoch,
            firing,
            presented_loss_curve: outcome.presented_loss_curve,
            train_loss_curve: outcome.train_loss_curve,
            afp_curve: outcome.afp_curve,
            end_epoch: config.optimizer.epochs,
            seconds: fold_start.elapsed().as_secs_f64(),
        })
    };

    let runs = run_parallel(folds.len(), config.run.jobs, run_one)?;

    let aucs: Vec<f64> = runs.iter().map(|r| r.auc).collect();
    let auc_mean = aucs.iter().sum::<f64>() / aucs.len() as f64;
    let auc_std = (aucs.iter().map(|a| (a - auc_mean) * (a - auc_mean)).sum::<f64>()
        / aucs.len() as f64)
        .sqrt();
    let epochs = config.optimizer.epochs;
    let mut loss_curve = vec![0.0; epochs];
    for run in &runs {
        for (acc, v) in loss_curve.iter_mut().zip(&run.train_loss_curve) {
            *acc += v / runs.len() as f64;
        }
    }
    let firing = runs
        .first()
        .map(|r| r.firing.clone())
        .unwrap_or_default();
    let n_pos = dataset.labels().iter().filter(|&&l| l == 1).count().max(1);
    let n_neg = (dataset.len() - n_pos).max(1);
    Ok(ExperimentReport {
        dataset: dataset.name.clone(),
        mode,
        seed,
        auc: auc_mean,
        auc_std,
        auc_ci: auc_confidence_interval(auc_mean, n_pos, n_neg),
        loss_curve,
        firing,
        runs,
        seconds: start.elapsed().as_secs_f64(),
        config: config.to_flat_map(),
    })
}

/// Execute `count` independent jobs over at most `jobs` worker threads,
/// preserving result order.
pub(crate) fn run_parallel<T: Send>(
    count: usize,
    jobs: usize,
    f: impl Fn(usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let workers = jobs.max(1).min(count.max(1));
    if workers <= 1 || count <= 1 {
        return (0..count).map(&f).collect();
    }
    let next = Mutex::new(0usize);
    let results: Mutex<Vec<Option<Result<T>>>> =
        Mutex::new((0..count).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().unwrap();
                    if *guard >= count {
                        break;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let result = f(idx);
                results.lock().unwrap()[idx] = Some(result);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("worker left a job unfinished"))
        .collect()
}

/// Paired comparison of training orders across seeds, including the dense
/// recurrent baseline under loss-ordered curricula for the
/// spiking-vs-conventional contrast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub spiking: BTreeMap<String, Vec<ExperimentReport>>,
    pub baseline: BTreeMap<String, Vec<BaselineRunSummary>>,
    /// (mode_a, mode_b, wins, losses, p_value) of one-sided sign tests on
    /// seed-paired spiking AUC differences.
    pub sign_tests: Vec<(String, String, usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRunSummary {
    pub mode: CurriculumMode,
    pub seed: u64,
    pub auc: f64,
    pub final_loss: f64,
    pub loss_curve: Vec<f64>,
}

pub fn compare_orders(
    dataset: &Dataset,
    config: &RunConfig,
    modes: &[CurriculumMode],
    seeds: &[u64],
    include_baseline: bool,
) -> Result<CompareReport> {
    if modes.len() < 2 {
        return Err(Error::InvalidArgument {
            name: "modes",
            message: "need at least two training orders to compare".into(),
        });
    }
    let mut spiking: BTreeMap<String, Vec<ExperimentReport>> = BTreeMap::new();
    let descriptors: Vec<(CurriculumMode, u64)> = modes
        .iter()
        .flat_map(|&m| seeds.iter().map(move |&s| (m, s)))
        .collect();
    let reports = run_parallel(descriptors.len(), config.run.jobs, |i| {
        let (mode, seed) = descriptors[i];
        run_experiment_with_mode(dataset, config, mode, seed)
    })?;
    for ((mode, _), report) in descriptors.iter().zip(reports) {
        spiking.entry(mode.as_str().to_string()).or_default().push(report);
    }

    let mut baseline: BTreeMap<String, Vec<BaselineRunSummary>> = BTreeMap::new();
    if include_baseline {
        for mode in [CurriculumMode::E2H, CurriculumMode::H2E, CurriculumMode::Random] {
            for &seed in seeds {
                baseline
                    .entry(mode.as_str().to_string())
                    .or_default()
                    .push(run_baseline(dataset, config, mode, seed)?);
            }
        }
    }

    let mut sign_tests = Vec::new();
    let first = modes[0];
    for &other in &modes[1..] {
        let a = &spiking[first.as_str()];
        let b = &spiking[other.as_str()];
        let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.auc - y.auc).collect();
        let (wins, losses, p) = sign_test(&diffs);
        sign_tests.push((
            first.as_str().to_string(),
            other.as_str().to_string(),
            wins,
            losses,
            p,
        ));
    }
    Ok(CompareReport {
        spiking,
        baseline,
        sign_tests,
    })
}

/// Train the parameter-matched dense baseline under a loss-ordered
/// curriculum, on raw normalized values.
pub fn run_baseline(
    dataset: &Dataset,
    config: &RunConfig,
    mode: CurriculumMode,
    seed: u64,
) -> Result<BaselineRunSummary> {
    let run_seed = derive_seed(seed, "baseline");
    let norm = MinMaxNorm::fit(dataset)?;
    let normalized = norm.apply(dataset);
    let dims = normalized.samples[0].dims;

    // Parameter-match the spiking model.
    let n_input = config.encoder.m_intervals * config.encoder.cluster_size;
    let mut sizes = vec![n_input];
    sizes.extend(&config.model.hidden_sizes);
    sizes.push(dataset.n_classes);
    let mut snn_params = 0usize;
    for l in 0..sizes.len() - 1 {
        snn_params += sizes[l] * sizes[l + 1];
        if config.model.recurrent[l] {
            snn_params += sizes[l + 1] * sizes[l + 1];
        }
    }
    let hidden = crate::baseline::parameter_matched_hidden(snn_params, dims, dataset.n_classes);
    let model = DenseRecurrent::new(dims, hidden, dataset.n_classes, 0.5, run_seed);

    let mut opt = config.optimizer;
    opt.seed = run_seed;
    // The dense net trains on raw values; it needs a larger step than the
    // spiking model's surrogate path.
    opt.learning_rate = config.baseline_lr;
    let mut trainer = BaselineTrainer::new(model, opt)?;
    let pacing = fold_pacing(config, normalized.len())?;
    let mut latest = vec![0.0; normalized.len()];
    let mut loss_curve = Vec::with_capacity(opt.epochs);
    let mut final_presented = 0.0;
    for epoch in 0..opt.epochs {
        let scores = score(&latest)?;
        let epoch_mode = if epoch < config.curriculum.warmup_epochs {
            CurriculumMode::Random
        } else {
            mode
        };
        let schedule_seed = derive_seed(run_seed, &format!("schedule-{epoch}"));
        let schedule = build_schedule(&scores, epoch_mode, &pacing, schedule_seed)?;
        let (presented, report) = trainer.train_epoch(&normalized, &schedule, epoch)?;
        latest = report.per_sample_loss.clone();
        loss_curve.push(report.mean_loss());
        final_presented = presented;
    }
    let report = evaluate_baseline(&trainer.model, &normalized)?;
    let auc = auc_roc_multiclass(&report.probabilities, &normalized.labels(), normalized.n_classes)?;
    Ok(BaselineRunSummary {
        mode,
        seed,
        auc,
        final_loss: final_presented,
        loss_curve,
    })
}

/// Train one model on the complete dataset under the configured
/// curriculum; the deployable-model path used by the CLI and the C API.
pub fn train_full_model(
    dataset: &Dataset,
    config: &RunConfig,
) -> Result<(crate::learning::SpikingClassifier, LossReport)> {
    config.validate()?;
    let (norm, encoder) = build_fold_encoder(dataset, config)?;
    let encoded = encode_split(dataset, &norm, &encoder)?;
    let mut model_config = config.model.clone();
    model_config.seed = config.run.seed;
    let model = crate::learning::SpikingClassifier::build(
        encoder,
        dataset.n_classes,
        &model_config,
        config.optimizer.learning_rate,
    )?;
    let trainer = Trainer::new(model, config.optimizer)?;
    let spec = FoldSpec {
        train: &encoded,
        test: None,
        mode: config.curriculum.mode,
        pacing: fold_pacing(config, encoded.len())?,
        warmup_epochs: config.curriculum.warmup_epochs,
        eval_every: 0,
        run_seed: config.run.seed,
        refresh_scores: true,
    };
    let outcome = train_fold(trainer, &spec)?;
    let (report, _) = evaluate_encoded(
        &outcome.trainer.model,
        &encoded,
        config.optimizer.surrogate_slope,
    )?;
    Ok((outcome.trainer.model, report))
}

/// Encode and evaluate a dataset under a trained model, normalizing with
/// the dataset's own range.
pub fn evaluate_model(
    model: &crate::learning::SpikingClassifier,
    dataset: &Dataset,
    slope: f64,
) -> Result<(LossReport, FiringStats, f64)> {
    let norm = MinMaxNorm::fit(dataset)?;
    let encoded = EncodedDataset {
        tensors: encode_dataset(&norm.apply(dataset), &model.encoder)?,
        labels: dataset.labels(),
        n_classes: dataset.n_classes,
    };
    if model.n_classes() != dataset.n_classes {
        return Err(Error::Data(format!(
            "model has {} output classes but dataset has {}",
            model.n_classes(),
            dataset.n_classes
        )));
    }
    let (report, firing) = evaluate_encoded(model, &encoded, slope)?;
    let auc = auc_roc_multiclass(&report.probabilities, &encoded.labels, encoded.n_classes)?;
    Ok((report, firing, auc))
}

/// Scores used to pick "most active" samples for noise targeting when no
/// trained model is available: seeded uniform draws.
pub fn synthetic_activity(n: usize, seed: u64) -> ScoreVector {
    let mut rng = rng_from(seed, "synthetic-activity");
    let losses: Vec<f64> = (0..n).map(|_| rand::RngExt::random::<f64>(&mut rng)).collect();
    score(&losses).expect("uniform losses are finite")
}

/// The desk-scale noisy benchmark for training-order comparisons: a small
/// two-frequency task where 30% of the samples (picked by seeded activity)
/// carry heavy additive noise. Activity-ordered training should learn the
/// clean structure first and defer the corrupted samples.
pub fn noisy_benchmark(seed: u64) -> Result<Dataset> {
    let clean = crate::data::generate_synthetic(
        crate::data::SyntheticKind::two_class_freq(0.05),
        20,
        48,
        derive_seed(seed, "noisy-benchmark-base"),
    )?;
    let activity = synthetic_activity(clean.len(), derive_seed(seed, "noisy-benchmark-pick"));
    crate::data::inject_noise(
        &clean,
        0.3,
        -6.0,
        &activity.scores,
        derive_seed(seed, "noisy-benchmark-noise"),
    )
}

/// Configuration for the desk-scale benchmark runs.
pub fn benchmark_config() -> RunConfig {
    let mut config = RunConfig::default();
    config.encoder.m_intervals = 3;
    config.encoder.cluster_size = 8;
    config.model.hidden_sizes = vec![24];
    config.model.recurrent = vec![true, false];
    config.optimizer.epochs = 30;
    config.optimizer.batch_size = 4;
    config.curriculum.start_percent = 0.1;
    config.curriculum.step_length = 10;
    config.run.folds = 2;
    config.run.eval_every = 5;
    config.run.jobs = 2;
    config
}
