//! Subcommand definitions and dispatch. Every subcommand is deterministic
//! given its config and seed; all randomness flows from the config's root
//! seed. Exit codes: 0 success, 1 usage, 2 data error, 3 numerical
//! failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use spikecl::config::RunConfig;
use spikecl::curriculum::CurriculumMode;
use spikecl::data::{generate_synthetic, load_ucr_tsv, save_ucr_tsv, SyntheticKind};
use spikecl::encoding::{drive_pattern, encode, fit_partition, EncoderConfig, EncoderMode};
use spikecl::error::{Error, Result};
use spikecl::harness::{
    compare_orders, run_experiment, synthetic_activity, write_loss_curve_csv, write_results_csv,
    write_summary_json,
};
use spikecl::learning::{evaluate_encoded, load_checkpoint, save_checkpoint, EncodedDataset};
use spikecl::verification::run_all_checks;

#[derive(Parser)]
#[command(
    name = "spikecl",
    version,
    about = "Spiking recurrent networks with curriculum-ordered training for time-series classification"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Path to a run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key, e.g. --set curriculum.mode=d2a.
    /// May be repeated.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (overrides run.out_dir and SPIKECL_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for folds and seeds (overrides run.jobs).
    #[arg(long)]
    jobs: Option<usize>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path, &self.overrides)?,
            None => RunConfig::from_text("", &self.overrides)?,
        };
        if let Some(out) = &self.out {
            config.run.out_dir = out.clone();
        }
        if let Some(jobs) = self.jobs {
            config.run.jobs = jobs;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Train under the configured curriculum and write report artifacts.
    Train {
        #[command(flatten)]
        config: ConfigArgs,
        /// Also write per-epoch schedule audit files.
        #[arg(long)]
        dump_schedules: bool,
    },
    /// Evaluate a saved model checkpoint on the configured dataset.
    Evaluate {
        #[command(flatten)]
        config: ConfigArgs,
        /// Model checkpoint produced by `train`.
        #[arg(long)]
        model: PathBuf,
    },
    /// Encode the configured dataset into spike-tensor files.
    Encode {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Generate a synthetic dataset and write it as UCR-style TSV.
    GenData {
        /// Synthetic kind: cbf or two-class-freq.
        #[arg(long, default_value = "cbf")]
        kind: String,
        /// Samples per class.
        #[arg(long, default_value_t = 30)]
        n: usize,
        /// Series length.
        #[arg(long, default_value_t = 128)]
        t_len: usize,
        /// Generator noise standard deviation.
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output TSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Add SNR-controlled Gaussian noise to the most active samples.
    InjectNoise {
        /// Input dataset (UCR-style TSV).
        #[arg(long)]
        data: PathBuf,
        /// Output TSV path.
        #[arg(long)]
        out: PathBuf,
        /// Fraction of most-active samples to perturb, in (0, 1].
        #[arg(long, default_value_t = 0.2)]
        fraction: f64,
        /// Signal-to-noise ratio in dB.
        #[arg(long, default_value_t = 20.0)]
        snr_db: f64,
        /// Model checkpoint whose per-sample activity picks the targets;
        /// without one, seeded synthetic activity is used.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run the numerical verification suite and print a pass/fail table.
    CheckTheorems {
        /// Monte-Carlo instances per check.
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
    },
    /// Train under several orders (plus the dense baseline) and compare.
    CompareOrders {
        #[command(flatten)]
        config: ConfigArgs,
        /// Comma-separated training orders, e.g. a2d,random,d2a.
        #[arg(long, default_value = "a2d,random")]
        modes: String,
        /// Comma-separated seeds; one run per (mode, seed).
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
        /// Skip the dense recurrent baseline runs.
        #[arg(long)]
        no_baseline: bool,
    },
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Train {
            config,
            dump_schedules,
        } => cmd_train(&config.load()?, dump_schedules),
        Command::Evaluate { config, model } => cmd_evaluate(&config.load()?, &model),
        Command::Encode { config } => cmd_encode(&config.load()?),
        Command::GenData {
            kind,
            n,
            t_len,
            noise,
            seed,
            out,
        } => cmd_gen_data(&kind, n, t_len, noise, seed, &out),
        Command::InjectNoise {
            data,
            out,
            fraction,
            snr_db,
            model,
            seed,
        } => cmd_inject_noise(&data, &out, fraction, snr_db, model.as_deref(), seed),
        Command::CheckTheorems { seeds } => cmd_check_theorems(seeds),
        Command::CompareOrders {
            config,
            modes,
            seeds,
            no_baseline,
        } => cmd_compare_orders(&config.load()?, &modes, &seeds, !no_baseline),
    }
}

fn ensure_out_dir(config: &RunConfig) -> Result<PathBuf> {
    let dir = config.run.out_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    Ok(dir)
}

fn cmd_train(config: &RunConfig, dump_schedules: bool) -> Result<i32> {
    let dataset = config.load_dataset()?;
    let out_dir = ensure_out_dir(config)?;
    let report = run_experiment(&dataset, config)?;

    write_results_csv(&report.runs, out_dir.join("results.csv"))?;
    write_summary_json(&report, out_dir.join("summary.json"))?;
    for run in &report.runs {
        write_loss_curve_csv(run, out_dir.join(format!("loss_curve_fold{}.csv", run.fold)))?;
    }
    if dump_schedules {
        dump_schedule_audit(config, &dataset, &out_dir)?;
    }

    // Train once more on the full dataset to produce a deployable model.
    let (model, _) = spikecl::harness::train_full_model(&dataset, config)?;
    save_checkpoint(&model, &config.optimizer, out_dir.join("model.json"))?;

    println!(
        "{}: mode={} auc={:.4} (+-{:.4}) afp={:.4} sparsity={:.4} -> {}",
        report.dataset,
        report.mode.as_str(),
        report.auc,
        report.auc_std,
        report.firing.afp,
        report.firing.sparsity_ratio,
        out_dir.display()
    );
    Ok(0)
}

fn dump_schedule_audit(config: &RunConfig, dataset: &spikecl::data::Dataset, out_dir: &PathBuf) -> Result<()> {
    // Audit listing of the first-epoch schedule under uniform warm-up
    // scores plus the final pacing table.
    let n = dataset.len();
    let scores = spikecl::curriculum::score(&vec![0.0; n])?;
    let pacing = spikecl::harness::fold_pacing(config, n)?;
    let schedule = spikecl::curriculum::build_schedule(
        &scores,
        config.curriculum.mode,
        &pacing,
        config.run.seed,
    )?;
    let text = schedule.to_audit_text(&scores);
    let path = out_dir.join("schedule_audit.txt");
    std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn cmd_evaluate(config: &RunConfig, model_path: &std::path::Path) -> Result<i32> {
    let checkpoint = load_checkpoint(model_path)?;
    let dataset = config.load_dataset()?;
    let (report, firing, auc) = spikecl::harness::evaluate_model(
        &checkpoint.model,
        &dataset,
        checkpoint.optimizer.surrogate_slope,
    )?;
    let correct = report
        .predicted_class
        .iter()
        .zip(&dataset.labels())
        .filter(|(p, l)| *p == *l)
        .count();
    let out_dir = ensure_out_dir(config)?;
    let eval_path = out_dir.join("evaluation.json");
    let body = serde_json::json!({
        "dataset": dataset.name,
        "samples": dataset.len(),
        "auc": auc,
        "accuracy": correct as f64 / dataset.len() as f64,
        "mean_loss": report.mean_loss(),
        "afp": firing.afp,
        "sparsity_ratio": firing.sparsity_ratio,
        "per_sample_loss": report.per_sample_loss,
        "predicted_class": report.predicted_class,
    });
    std::fs::write(&eval_path, serde_json::to_string_pretty(&body).unwrap())
        .map_err(|e| Error::io(eval_path.display().to_string(), e))?;
    println!(
        "{}: auc={auc:.4} accuracy={:.4} mean_loss={:.4} -> {}",
        dataset.name,
        correct as f64 / dataset.len() as f64,
        report.mean_loss(),
        eval_path.display()
    );
    Ok(0)
}

fn cmd_encode(config: &RunConfig) -> Result<i32> {
    let dataset = config.load_dataset()?;
    let out_dir = ensure_out_dir(config)?;
    let norm = spikecl::data::MinMaxNorm::fit(&dataset)?;
    let normalized = norm.apply(&dataset);

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
            config.n_input(),
            0.0,
            1.0,
            config.encoder.gain,
        )?,
    };

    // Partition file: one boundary per line (population mode lists the
    // trivial [0, 1] domain).
    let boundaries: Vec<f64> = match &encoder.partition {
        Some(p) => p.boundaries.clone(),
        None => vec![0.0, 1.0],
    };
    let mut partition_text = String::new();
    for b in &boundaries {
        partition_text.push_str(&format!("{b}\n"));
    }
    let partition_path = out_dir.join("partition.txt");
    std::fs::write(&partition_path, partition_text)
        .map_err(|e| Error::io(partition_path.display().to_string(), e))?;

    for (i, sample) in normalized.samples.iter().enumerate() {
        let tensor = encode(sample, &encoder)?;
        let mut text = format!("{} {}\n", tensor.steps, tensor.neurons);
        for t in 0..tensor.steps {
            for j in 0..tensor.neurons {
                text.push(if tensor.get(t, j) == 1 { '1' } else { '0' });
            }
            text.push('\n');
        }
        let path = out_dir.join(format!("sample_{i:04}.spikes"));
        std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))?;

        let mask = drive_pattern(sample, &encoder)?;
        let mut mask_text = String::new();
        for row in &mask {
            for &m in row {
                mask_text.push(if m == 1 { '1' } else { '0' });
            }
            mask_text.push('\n');
        }
        let mask_path = out_dir.join(format!("sample_{i:04}.mask"));
        std::fs::write(&mask_path, mask_text)
            .map_err(|e| Error::io(mask_path.display().to_string(), e))?;
    }
    println!(
        "encoded {} samples ({} neurons) -> {}",
        normalized.len(),
        encoder.n_input,
        out_dir.display()
    );
    Ok(0)
}

fn cmd_gen_data(kind: &str, n: usize, t_len: usize, noise: f64, seed: u64, out: &std::path::Path) -> Result<i32> {
    let kind = match kind.to_ascii_lowercase().as_str() {
        "cbf" | "cbf-like" => SyntheticKind::cbf_like(noise),
        "two-class-freq" | "freq" => SyntheticKind::two_class_freq(noise),
        other => {
            return Err(Error::InvalidArgument {
                name: "kind",
                message: format!("unknown synthetic kind `{other}`"),
            })
        }
    };
    let dataset = generate_synthetic(kind, n, t_len, seed)?;
    save_ucr_tsv(&dataset, out)?;
    println!(
        "wrote {} samples x {} steps ({} classes) -> {}",
        dataset.len(),
        t_len,
        dataset.n_classes,
        out.display()
    );
    Ok(0)
}

fn cmd_inject_noise(
    data: &std::path::Path,
    out: &std::path::Path,
    fraction: f64,
    snr_db: f64,
    model: Option<&std::path::Path>,
    seed: u64,
) -> Result<i32> {
    let dataset = load_ucr_tsv(data)?;
    let activity: Vec<f64> = match model {
        Some(path) => {
            let checkpoint = load_checkpoint(path)?;
            let norm = spikecl::data::MinMaxNorm::fit(&dataset)?;
            let encoded = EncodedDataset {
                tensors: spikecl::encoding::encode_dataset(
                    &norm.apply(&dataset),
                    &checkpoint.model.encoder,
                )?,
                labels: dataset.labels(),
                n_classes: dataset.n_classes,
            };
            let (report, _) = evaluate_encoded(
                &checkpoint.model,
                &encoded,
                checkpoint.optimizer.surrogate_slope,
            )?;
            report.activity
        }
        None => synthetic_activity(dataset.len(), seed).scores,
    };
    let noisy = spikecl::data::inject_noise(&dataset, fraction, snr_db, &activity, seed)?;
    save_ucr_tsv(&noisy, out)?;
    let changed = dataset
        .samples
        .iter()
        .zip(&noisy.samples)
        .filter(|(a, b)| a.values != b.values)
        .count();
    println!(
        "perturbed {changed}/{} samples at {snr_db} dB -> {}",
        dataset.len(),
        out.display()
    );
    Ok(0)
}

fn cmd_check_theorems(instances: usize) -> Result<i32> {
    let outcomes = run_all_checks(instances)?;
    println!("{:<28} {:<6} detail", "check", "result");
    let mut failures = 0;
    for outcome in &outcomes {
        let verdict = match outcome.passed {
            Some(true) => "PASS",
            Some(false) => {
                failures += 1;
                "FAIL"
            }
            None => "INFO",
        };
        println!("{:<28} {:<6} {}", outcome.name, verdict, outcome.detail);
    }
    if failures > 0 {
        eprintln!("{failures} check(s) failed");
        return Err(Error::Metric(format!("{failures} verification check(s) failed")));
    }
    Ok(0)
}

fn cmd_compare_orders(config: &RunConfig, modes: &str, seeds: &str, baseline: bool) -> Result<i32> {
    let modes: Vec<CurriculumMode> = modes
        .split(',')
        .map(|m| CurriculumMode::parse(m.trim()))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<u64> = seeds
        .split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::InvalidArgument {
                name: "seeds",
                message: format!("bad seed `{s}`"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dataset = config.load_dataset()?;
    let out_dir = ensure_out_dir(config)?;
    let report = compare_orders(&dataset, config, &modes, &seeds, baseline)?;

    let json_path = out_dir.join("compare_orders.json");
    std::fs::write(
        &json_path,
        serde_json::to_string_pretty(&report)
            .map_err(|e| Error::Data(format!("report serialization failed: {e}")))?,
    )
    .map_err(|e| Error::io(json_path.display().to_string(), e))?;

    let mut csv = String::from("model,mode,seed,auc\n");
    for (mode, runs) in &report.spiking {
        for r in runs {
            csv.push_str(&format!("spiking,{mode},{},{}\n", r.seed, r.auc));
        }
    }
    for (mode, runs) in &report.baseline {
        for r in runs {
            csv.push_str(&format!("baseline,{mode},{},{}\n", r.seed, r.auc));
        }
    }
    let csv_path = out_dir.join("compare_orders.csv");
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(csv_path.display().to_string(), e))?;

    for (mode, runs) in &report.spiking {
        let mean: f64 = runs.iter().map(|r| r.auc).sum::<f64>() / runs.len() as f64;
        println!("spiking  {mode:<7} mean auc {mean:.4} over {} seeds", runs.len());
    }
    for (mode, runs) in &report.baseline {
        let mean: f64 = runs.iter().map(|r| r.auc).sum::<f64>() / runs.len() as f64;
        println!("baseline {mode:<7} mean auc {mean:.4} over {} seeds", runs.len());
    }
    for (a, b, wins, losses, p) in &report.sign_tests {
        println!("sign test {a} vs {b}: +{wins}-{losses} p={p:.4}");
    }
    println!("-> {}", out_dir.display());
    Ok(0)
}
