//! Run configuration: a flat, human-readable key-value format with
//! `[section]` headers, every key overridable from the command line as
//! `--set section.key=value`. Defaults mirror the univariate-benchmark
//! hyper-parameter row (time constants (20,5)/(150,10)/(20,5), a=20, fixed
//! zero bias, 5% start, step 50, lr 1e-2 halved every 10 epochs, 5
//! intervals of 16 neurons).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curriculum::CurriculumMode;
use crate::data::SyntheticKind;
use crate::encoding::EncoderMode;
use crate::error::{Error, Result};
use crate::learning::{ModelConfig, OptimizerConfig};
use crate::spiking::V0Mode;

/// Environment variable overriding `run.out_dir`.
pub const OUT_DIR_ENV: &str = "SPIKECL_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DataSource {
    Synthetic { kind: String, n: usize, t_len: usize, noise: f64 },
    UcrTsv(PathBuf),
    CsvDir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSection {
    pub source: DataSource,
    pub seed: u64,
    /// Timestep drop probability for irregular-sampling runs; 0 disables.
    pub drop_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncoderSection {
    pub mode: EncoderMode,
    pub m_intervals: usize,
    pub cluster_size: usize,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurriculumSection {
    pub mode: CurriculumMode,
    pub start_percent: f64,
    pub step_length: usize,
    pub warmup_epochs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub folds: usize,
    pub seed: u64,
    pub jobs: usize,
    pub out_dir: PathBuf,
    /// Test-AUC evaluation cadence in epochs; 0 evaluates only at the end.
    pub eval_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dataset: DatasetSection,
    pub encoder: EncoderSection,
    pub model: ModelConfig,
    pub optimizer: OptimizerConfig,
    pub curriculum: CurriculumSection,
    pub run: RunSection,
    /// Learning rate for the dense baseline (raw-value inputs need larger
    /// steps than the surrogate path).
    pub baseline_lr: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset: DatasetSection {
                source: DataSource::Synthetic {
                    kind: "cbf".into(),
                    n: 30,
                    t_len: 128,
                    noise: 0.05,
                },
                seed: 42,
                drop_prob: 0.0,
            },
            encoder: EncoderSection {
                mode: EncoderMode::Regional,
                m_intervals: 5,
                cluster_size: 16,
                gain: 1.5,
            },
            model: ModelConfig::default(),
            optimizer: OptimizerConfig::default(),
            curriculum: CurriculumSection {
                mode: CurriculumMode::A2D,
                start_percent: 0.05,
                step_length: 50,
                warmup_epochs: 1,
            },
            run: RunSection {
                folds: 5,
                seed: 42,
                jobs: 1,
                out_dir: PathBuf::from("out"),
                eval_every: 5,
            },
            baseline_lr: 0.5,
        }
    }
}

impl RunConfig {
    pub fn n_input(&self) -> usize {
        self.encoder.m_intervals * self.encoder.cluster_size
    }

    pub fn validate(&self) -> Result<()> {
        self.optimizer.validate()?;
        if self.encoder.m_intervals == 0 || self.encoder.cluster_size == 0 {
            return Err(Error::config(
                "encoder.m",
                "interval count and cluster size must be positive",
            ));
        }
        if self.encoder.m_intervals > self.n_input() {
            return Err(Error::config(
                "encoder.m",
                "more intervals than encoder neurons",
            ));
        }
        if self.model.hidden_sizes.is_empty() {
            return Err(Error::config("topology.hidden", "need at least one hidden layer"));
        }
        if self.model.recurrent.len() != self.model.hidden_sizes.len() + 1 {
            return Err(Error::config(
                "topology.recurrent",
                format!(
                    "need one flag per trainable layer ({} hidden + output), got {}",
                    self.model.hidden_sizes.len(),
                    self.model.recurrent.len()
                ),
            ));
        }
        if !(self.curriculum.start_percent > 0.0 && self.curriculum.start_percent <= 1.0) {
            return Err(Error::config(
                "curriculum.sp",
                format!("start percent must be in (0, 1], got {}", self.curriculum.start_percent),
            ));
        }
        if self.curriculum.step_length == 0 {
            return Err(Error::config("curriculum.ss", "step length must be positive"));
        }
        if self.run.folds == 0 {
            return Err(Error::config("run.folds", "fold count must be positive"));
        }
        if let DataSource::Synthetic { kind, n, t_len, .. } = &self.dataset.source {
            synthetic_kind(kind, 0.0)?;
            if *n < 2 {
                return Err(Error::config("dataset.n", "need at least 2 samples per class"));
            }
            if *t_len == 0 {
                return Err(Error::config("dataset.t_len", "series length must be positive"));
            }
        }
        Ok(())
    }

    /// Load the configured dataset (generating, reading, and optionally
    /// dropping timesteps for irregular sampling).
    pub fn load_dataset(&self) -> Result<crate::data::Dataset> {
        let dataset = match &self.dataset.source {
            DataSource::Synthetic { kind, n, t_len, noise } => {
                crate::data::generate_synthetic(synthetic_kind(kind, *noise)?, *n, *t_len, self.dataset.seed)?
            }
            DataSource::UcrTsv(path) => crate::data::load_ucr_tsv(path)?,
            DataSource::CsvDir(path) => crate::data::load_multivariate_csv_dir(path)?,
        };
        if self.dataset.drop_prob > 0.0 {
            crate::data::make_irregular(&dataset, self.dataset.drop_prob, self.dataset.seed)
        } else {
            Ok(dataset)
        }
    }

    /// Resolved settings as `section.key -> value`, embedded in reports.
    pub fn to_flat_map(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            map.insert(k.to_string(), v);
        };
        match &self.dataset.source {
            DataSource::Synthetic { kind, n, t_len, noise } => {
                put("dataset.source", "synthetic".into());
                put("dataset.kind", kind.clone());
                put("dataset.n", n.to_string());
                put("dataset.t_len", t_len.to_string());
                put("dataset.noise", noise.to_string());
            }
            DataSource::UcrTsv(path) => {
                put("dataset.source", "ucr".into());
                put("dataset.path", path.display().to_string());
            }
            DataSource::CsvDir(path) => {
                put("dataset.source", "csv".into());
                put("dataset.path", path.display().to_string());
            }
        }
        put("dataset.seed", self.dataset.seed.to_string());
        put("dataset.drop_prob", self.dataset.drop_prob.to_string());
        put(
            "encoder.mode",
            match self.encoder.mode {
                EncoderMode::Regional => "regional".into(),
                EncoderMode::Population => "population".into(),
            },
        );
        put("encoder.m", self.encoder.m_intervals.to_string());
        put("encoder.cluster_size", self.encoder.cluster_size.to_string());
        put("encoder.gain", self.encoder.gain.to_string());
        put(
            "topology.hidden",
            self.model
                .hidden_sizes
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        put(
            "topology.recurrent",
            self.model
                .recurrent
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        put("topology.weight_mu", self.model.weight_init.mu.to_string());
        put("topology.weight_sigma", self.model.weight_init.sigma.to_string());
        let spec = &self.model.neuron_spec;
        put("neuron.tau_m_mu", spec.tau_m_mu.to_string());
        put("neuron.tau_m_sigma", spec.tau_m_sigma.to_string());
        put("neuron.tau_s_mu", spec.tau_s_mu.to_string());
        put("neuron.tau_s_sigma", spec.tau_s_sigma.to_string());
        put("neuron.tau_mu", spec.tau_mu.to_string());
        put("neuron.tau_sigma", spec.tau_sigma.to_string());
        put("neuron.v_th", spec.v_threshold.to_string());
        put(
            "neuron.v0_mode",
            match spec.v0_mode {
                V0Mode::PaperFormula => "paper".into(),
                V0Mode::ExactPeakNormalizer => "exact-peak".into(),
            },
        );
        put("neuron.a", self.model.membrane_init_a.to_string());
        put("optimizer.lr", self.optimizer.learning_rate.to_string());
        put("optimizer.lr_decay", self.optimizer.lr_decay_factor.to_string());
        put("optimizer.lr_decay_every", self.optimizer.lr_decay_every.to_string());
        put("optimizer.slope", self.optimizer.surrogate_slope.to_string());
        put("optimizer.epochs", self.optimizer.epochs.to_string());
        put("optimizer.batch", self.optimizer.batch_size.to_string());
        put(
            "optimizer.truncation",
            self.optimizer
                .bptt_truncation
                .map(|t| t.to_string())
                .unwrap_or_else(|| "0".into()),
        );
        put("curriculum.mode", self.curriculum.mode.as_str().into());
        put("curriculum.sp", self.curriculum.start_percent.to_string());
        put("curriculum.ss", self.curriculum.step_length.to_string());
        put("curriculum.warmup", self.curriculum.warmup_epochs.to_string());
        put("run.folds", self.run.folds.to_string());
        put("run.seed", self.run.seed.to_string());
        put("run.jobs", self.run.jobs.to_string());
        put("run.out_dir", self.run.out_dir.display().to_string());
        put("run.eval_every", self.run.eval_every.to_string());
        put("baseline.lr", self.baseline_lr.to_string());
        map
    }

    /// Parse a config file plus `--set section.key=value` overrides.
    pub fn load(path: impl AsRef<Path>, overrides: &[String]) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_text(&text, overrides)
    }

    pub fn from_text(text: &str, overrides: &[String]) -> Result<Self> {
        let mut map = parse_flat(text)?;
        for entry in overrides {
            let (key, value) = entry.split_once('=').ok_or_else(|| {
                Error::config(entry.clone(), "override must look like section.key=value")
            })?;
            if !key.contains('.') {
                return Err(Error::config(
                    key.to_string(),
                    "override key must be section.key",
                ));
            }
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_flat_map(map)
    }

    fn from_flat_map(map: BTreeMap<String, String>) -> Result<Self> {
        let mut config = RunConfig::default();
        let mut unknown: Vec<String> = Vec::new();
        // The source discriminant must land before keys that depend on it.
        if let Some(value) = map.get("dataset.source") {
            apply_key(&mut config, "dataset.source", value)?;
        }
        for (key, value) in &map {
            if key == "dataset.source" {
                continue;
            }
            if !apply_key(&mut config, key, value)? {
                unknown.push(key.clone());
            }
        }
        config.model.seed = config.run.seed;
        config.optimizer.seed = config.run.seed;
        if !unknown.is_empty() {
            return Err(Error::config(
                unknown.join(", "),
                "unknown configuration key(s)",
            ));
        }
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                config.run.out_dir = PathBuf::from(dir);
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn synthetic_kind(name: &str, noise: f64) -> Result<SyntheticKind> {
    match name.to_ascii_lowercase().as_str() {
        "cbf" | "cbf-like" => Ok(SyntheticKind::cbf_like(noise)),
        "two-class-freq" | "freq" => Ok(SyntheticKind::two_class_freq(noise)),
        other => Err(Error::config(
            "dataset.kind",
            format!("unknown synthetic kind `{other}` (expected cbf or two-class-freq)"),
        )),
    }
}

fn parse_flat(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    let mut section = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            path: "<config>".into(),
            line: idx + 1,
            message: format!("expected key = value, got `{line}`"),
        })?;
        let full_key = if section.is_empty() {
            key.trim().to_string()
        } else {
            format!("{section}.{}", key.trim())
        };
        map.insert(full_key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::config(
            key.to_string(),
            format!("cannot parse `{value}` as {}", std::any::type_name::<T>()),
        )
    })
}

/// Apply one `section.key = value`; returns false for unknown keys.
fn apply_key(config: &mut RunConfig, key: &str, value: &str) -> Result<bool> {
    match key {
        "dataset.source" => {
            config.dataset.source = match value.to_ascii_lowercase().as_str() {
                "synthetic" => match &config.dataset.source {
                    DataSource::Synthetic { .. } => config.dataset.source.clone(),
                    _ => DataSource::Synthetic {
                        kind: "cbf".into(),
                        n: 30,
                        t_len: 128,
                        noise: 0.05,
                    },
                },
                "ucr" => DataSource::UcrTsv(PathBuf::new()),
                "csv" => DataSource::CsvDir(PathBuf::new()),
                other => {
                    return Err(Error::config(
                        key.to_string(),
                        format!("unknown source `{other}` (synthetic, ucr, csv)"),
                    ))
                }
            };
        }
        "dataset.kind" => {
            if let DataSource::Synthetic { kind, .. } = &mut config.dataset.source {
                *kind = value.to_string();
            } else {
                return Err(Error::config(key.to_string(), "kind applies to synthetic sources"));
            }
        }
        "dataset.n" => {
            if let DataSource::Synthetic { n, .. } = &mut config.dataset.source {
                *n = parse_value(key, value)?;
            }
        }
        "dataset.t_len" => {
            if let DataSource::Synthetic { t_len, .. } = &mut config.dataset.source {
                *t_len = parse_value(key, value)?;
            }
        }
        "dataset.noise" => {
            if let DataSource::Synthetic { noise, .. } = &mut config.dataset.source {
                *noise = parse_value(key, value)?;
            }
        }
        "dataset.path" => match &mut config.dataset.source {
            DataSource::UcrTsv(path) | DataSource::CsvDir(path) => {
                *path = PathBuf::from(value);
            }
            DataSource::Synthetic { .. } => {
                return Err(Error::config(
                    key.to_string(),
                    "path applies to ucr/csv sources; set dataset.source first",
                ))
            }
        },
        "dataset.seed" => config.dataset.seed = parse_value(key, value)?,
        "dataset.drop_prob" => config.dataset.drop_prob = parse_value(key, value)?,
        "encoder.mode" => {
            config.encoder.mode = match value.to_ascii_lowercase().as_str() {
                "regional" => EncoderMode::Regional,
                "population" => EncoderMode::Population,
                other => {
                    return Err(Error::config(
                        key.to_string(),
                        format!("unknown encoder mode `{other}`"),
                    ))
                }
            };
        }
        "encoder.m" => config.encoder.m_intervals = parse_value(key, value)?,
        "encoder.cluster_size" => config.encoder.cluster_size = parse_value(key, value)?,
        "encoder.gain" => config.encoder.gain = parse_value(key, value)?,
        "topology.hidden" => {
            config.model.hidden_sizes = value
                .split(',')
                .map(|v| parse_value(key, v.trim()))
                .collect::<Result<Vec<usize>>>()?;
            // Keep the recurrent flag list aligned: recurrent hidden
            // layers, feedforward output.
            config.model.recurrent = vec![true; config.model.hidden_sizes.len()];
            config.model.recurrent.push(false);
        }
        "topology.recurrent" => {
            config.model.recurrent = value
                .split(',')
                .map(|v| parse_value(key, v.trim()))
                .collect::<Result<Vec<bool>>>()?;
        }
        "topology.weight_mu" => config.model.weight_init.mu = parse_value(key, value)?,
        "topology.weight_sigma" => config.model.weight_init.sigma = parse_value(key, value)?,
        "neuron.tau_m_mu" => config.model.neuron_spec.tau_m_mu = parse_value(key, value)?,
        "neuron.tau_m_sigma" => config.model.neuron_spec.tau_m_sigma = parse_value(key, value)?,
        "neuron.tau_s_mu" => config.model.neuron_spec.tau_s_mu = parse_value(key, value)?,
        "neuron.tau_s_sigma" => config.model.neuron_spec.tau_s_sigma = parse_value(key, value)?,
        "neuron.tau_mu" => config.model.neuron_spec.tau_mu = parse_value(key, value)?,
        "neuron.tau_sigma" => config.model.neuron_spec.tau_sigma = parse_value(key, value)?,
        "neuron.v_th" => config.model.neuron_spec.v_threshold = parse_value(key, value)?,
        "neuron.v0_mode" => {
            config.model.neuron_spec.v0_mode = match value.to_ascii_lowercase().as_str() {
                "paper" => V0Mode::PaperFormula,
                "exact-peak" | "exact" => V0Mode::ExactPeakNormalizer,
                other => {
                    return Err(Error::config(
                        key.to_string(),
                        format!("unknown v0 mode `{other}` (paper, exact-peak)"),
                    ))
                }
            };
        }
        "neuron.a" => config.model.membrane_init_a = parse_value(key, value)?,
        "optimizer.lr" => config.optimizer.learning_rate = parse_value(key, value)?,
        "optimizer.lr_decay" => config.optimizer.lr_decay_factor = parse_value(key, value)?,
        "optimizer.lr_decay_every" => config.optimizer.lr_decay_every = parse_value(key, value)?,
        "optimizer.slope" => config.optimizer.surrogate_slope = parse_value(key, value)?,
        "optimizer.epochs" => config.optimizer.epochs = parse_value(key, value)?,
        "optimizer.batch" => config.optimizer.batch_size = parse_value(key, value)?,
        "optimizer.truncation" => {
            let t: usize = parse_value(key, value)?;
            config.optimizer.bptt_truncation = if t == 0 { None } else { Some(t) };
        }
        "curriculum.mode" => config.curriculum.mode = CurriculumMode::parse(value)?,
        "curriculum.sp" => config.curriculum.start_percent = parse_value(key, value)?,
        "curriculum.ss" => config.curriculum.step_length = parse_value(key, value)?,
        "curriculum.warmup" => config.curriculum.warmup_epochs = parse_value(key, value)?,
        "run.folds" => config.run.folds = parse_value(key, value)?,
        "run.seed" => config.run.seed = parse_value(key, value)?,
        "run.jobs" => config.run.jobs = parse_value(key, value)?,
        "run.out_dir" => config.run.out_dir = PathBuf::from(value),
        "run.eval_every" => config.run.eval_every = parse_value(key, value)?,
        "baseline.lr" => config.baseline_lr = parse_value(key, value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Render the default configuration as an annotated example file.
pub fn example_config() -> String {
    let config = RunConfig::default();
    let map = config.to_flat_map();
    let mut out = String::from("# spikecl run configuration\n");
    let mut section = String::new();
    for (key, value) in &map {
        let (sec, name) = key.split_once('.').unwrap();
        if sec != section {
            out.push_str(&format!("\n[{sec}]\n"));
            section = sec.to_string();
        }
        out.push_str(&format!("{name} = {value}\n"));
    }
    out
}
