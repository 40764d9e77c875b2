//! Dataset types and ingestion: UCR-style TSV, multivariate CSV directories,
//! synthetic generators, min-max normalization, noise injection, and
//! irregular-sampling subsampling.

mod synthetic;

pub use synthetic::{generate_synthetic, SyntheticKind};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::RngExt;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from;

/// One labelled time series: a `T x D` value matrix (row-major) plus strictly
/// increasing timestamps. `D = 1` for univariate data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesSample {
    pub values: Vec<f64>,
    pub steps: usize,
    pub dims: usize,
    pub timestamps: Vec<f64>,
    pub label: usize,
}

impl TimeSeriesSample {
    /// Univariate sample with default unit-spaced timestamps.
    pub fn univariate(values: Vec<f64>, label: usize) -> Result<Self> {
        let steps = values.len();
        let timestamps = (0..steps).map(|t| t as f64).collect();
        Self::new(values, steps, 1, timestamps, label)
    }

    pub fn new(
        values: Vec<f64>,
        steps: usize,
        dims: usize,
        timestamps: Vec<f64>,
        label: usize,
    ) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Data("sample must have at least one timestep".into()));
        }
        if values.len() != steps * dims {
            return Err(Error::DimensionMismatch {
                context: "sample values",
                expected: steps * dims,
                actual: values.len(),
            });
        }
        if timestamps.len() != steps {
            return Err(Error::DimensionMismatch {
                context: "sample timestamps",
                expected: steps,
                actual: timestamps.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("sample contains non-finite values".into()));
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Data(
                "timestamps must be strictly increasing".into(),
            ));
        }
        Ok(TimeSeriesSample {
            values,
            steps,
            dims,
            timestamps,
            label,
        })
    }

    #[inline]
    pub fn value(&self, t: usize, d: usize) -> f64 {
        self.values[t * self.dims + d]
    }

    /// Mean across variables at timestep `t`; the scalar the partition and
    /// encoders operate on for multivariate data.
    pub fn scalar_at(&self, t: usize) -> f64 {
        let row = &self.values[t * self.dims..(t + 1) * self.dims];
        row.iter().sum::<f64>() / self.dims as f64
    }

    /// Whether the timestamps are the default 0,1,2,... grid.
    pub fn regular_unit_grid(&self) -> bool {
        self.timestamps
            .iter()
            .enumerate()
            .all(|(i, &ts)| ts == i as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub samples: Vec<TimeSeriesSample>,
    pub n_classes: usize,
    pub name: String,
}

impl Dataset {
    pub fn new(samples: Vec<TimeSeriesSample>, n_classes: usize, name: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Data("dataset must be non-empty".into()));
        }
        if let Some(s) = samples.iter().find(|s| s.label >= n_classes) {
            return Err(Error::Data(format!(
                "label {} out of range for {} classes",
                s.label, n_classes
            )));
        }
        Ok(Dataset {
            samples,
            n_classes,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Global min/max over all scalar values (multivariate reduced by mean).
    pub fn value_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in &self.samples {
            for t in 0..s.steps {
                let v = s.scalar_at(t);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        (lo, hi)
    }
}

/// Fitted min-max normalizer. Fit on the training fold, applied (with
/// clamping) to held-out data so the encoder domain stays [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxNorm {
    pub lo: f64,
    pub hi: f64,
}

impl MinMaxNorm {
    pub fn fit(dataset: &Dataset) -> Result<Self> {
        let (lo, hi) = dataset.value_range();
        if !(hi > lo) {
            return Err(Error::Data(format!(
                "cannot normalize: value range is degenerate (min == max == {lo})"
            )));
        }
        Ok(MinMaxNorm { lo, hi })
    }

    pub fn apply(&self, dataset: &Dataset) -> Dataset {
        let scale = 1.0 / (self.hi - self.lo);
        let samples = dataset
            .samples
            .iter()
            .map(|s| {
                let mut out = s.clone();
                for v in &mut out.values {
                    *v = ((*v - self.lo) * scale).clamp(0.0, 1.0);
                }
                out
            })
            .collect();
        Dataset {
            samples,
            n_classes: dataset.n_classes,
            name: dataset.name.clone(),
        }
    }
}

/// Load a UCR-style TSV: one series per line, label first, tab-separated.
/// Original labels are remapped to `0..K-1` preserving their sorted order.
pub fn load_ucr_tsv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_ucr_tsv(&text, &path.display().to_string())
}

fn parse_ucr_tsv(text: &str, path: &str) -> Result<Dataset> {
    let mut raw: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut expect_len: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(['\t', ',']);
        let label_field = fields.next().unwrap_or("");
        let label: f64 = label_field.trim().parse().map_err(|_| Error::Parse {
            path: path.to_string(),
            line: line_no,
            message: format!("bad label field `{label_field}`"),
        })?;
        let mut values = Vec::new();
        for f in fields {
            let f = f.trim();
            if f.is_empty() || f.eq_ignore_ascii_case("nan") {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: "missing value".into(),
                });
            }
            let v: f64 = f.parse().map_err(|_| Error::Parse {
                path: path.to_string(),
                line: line_no,
                message: format!("bad value `{f}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("non-finite value `{f}`"),
                });
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::Parse {
                path: path.to_string(),
                line: line_no,
                message: "row has a label but no values".into(),
            });
        }
        match expect_len {
            None => expect_len = Some(values.len()),
            Some(l) if l != values.len() => {
                return Err(Error::Parse {
                    path: path.to_string(),
                    line: line_no,
                    message: format!("row length {} differs from first row {}", values.len(), l),
                });
            }
            _ => {}
        }
        raw.push((label, values));
    }
    if raw.is_empty() {
        return Err(Error::Data(format!("{path}: file contains no samples")));
    }

    // Remap labels to 0..K-1 preserving sorted original order.
    let mut unique: Vec<f64> = raw.iter().map(|(l, _)| *l).collect();
    unique.sort_by(|a, b| a.partial_cmp(b).unwrap());
    unique.dedup();
    let index_of = |l: f64| unique.iter().position(|u| *u == l).unwrap();

    let samples = raw
        .into_iter()
        .map(|(l, values)| TimeSeriesSample::univariate(values, index_of(l)))
        .collect::<Result<Vec<_>>>()?;
    let name = Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string());
    Dataset::new(samples, unique.len(), name)
}

/// Save in the same TSV layout `load_ucr_tsv` reads. Values print in the
/// shortest form that round-trips, so load -> save -> load is exact.
pub fn save_ucr_tsv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for s in &dataset.samples {
        if s.dims != 1 {
            return Err(Error::Data(
                "UCR TSV holds univariate series only; use the CSV directory format".into(),
            ));
        }
        let _ = write!(out, "{}", s.label);
        for v in &s.values {
            let _ = write!(out, "\t{v}");
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Load a directory of multivariate CSV series. Layout:
///   dir/labels.csv          header `file,label`, one row per series
///   dir/<file>              header `timestamp,var1,...,varD`, one row per step
pub fn load_multivariate_csv_dir(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let manifest = dir.join("labels.csv");
    let text = std::fs::read_to_string(&manifest)
        .map_err(|e| Error::io(manifest.display().to_string(), e))?;
    let mut entries: Vec<(String, f64)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 || line.trim().is_empty() {
            continue; // header
        }
        let mut parts = line.splitn(2, ',');
        let file = parts.next().unwrap_or("").trim().to_string();
        let label: f64 = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| Error::Parse {
                path: manifest.display().to_string(),
                line: idx + 1,
                message: "bad label".into(),
            })?;
        entries.push((file, label));
    }
    if entries.is_empty() {
        return Err(Error::Data(format!(
            "{}: no series listed",
            manifest.display()
        )));
    }
    let mut unique: Vec<f64> = entries.iter().map(|(_, l)| *l).collect();
    unique.sort_by(|a, b| a.partial_cmp(b).unwrap());
    unique.dedup();

    let mut samples = Vec::with_capacity(entries.len());
    for (file, label) in &entries {
        let path = dir.join(file);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut timestamps = Vec::new();
        let mut values = Vec::new();
        let mut dims = 0usize;
        for (idx, line) in text.lines().enumerate() {
            if idx == 0 || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 2 {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message: "expected timestamp plus at least one variable".into(),
                });
            }
            if dims == 0 {
                dims = fields.len() - 1;
            } else if fields.len() - 1 != dims {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: idx + 1,
                    message: "inconsistent variable count".into(),
                });
            }
            let parse = |f: &str, line: usize| -> Result<f64> {
                f.trim().parse().map_err(|_| Error::Parse {
                    path: path.display().to_string(),
                    line,
                    message: format!("bad number `{f}`"),
                })
            };
            timestamps.push(parse(fields[0], idx + 1)?);
            for f in &fields[1..] {
                values.push(parse(f, idx + 1)?);
            }
        }
        let steps = timestamps.len();
        let mapped = unique.iter().position(|u| u == label).unwrap();
        samples.push(TimeSeriesSample::new(values, steps, dims, timestamps, mapped)?);
    }
    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Dataset::new(samples, unique.len(), name)
}

/// Additive Gaussian noise at the requested SNR, applied only to the
/// `fraction` most active samples. Per-sample noise variance is
/// `signal_power / 10^(snr_db/10)` with signal power the mean squared value.
pub fn inject_noise(
    dataset: &Dataset,
    fraction: f64,
    snr_db: f64,
    activity: &[f64],
    seed: u64,
) -> Result<Dataset> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument {
            name: "fraction",
            message: format!("must be in (0, 1], got {fraction}"),
        });
    }
    if activity.len() != dataset.len() {
        return Err(Error::DimensionMismatch {
            context: "noise activity vector",
            expected: dataset.len(),
            actual: activity.len(),
        });
    }
    let n = dataset.len();
    let count = ((fraction * n as f64).round() as usize).clamp(1, n);
    // Most active first; ties broken by original index for determinism.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        activity[b]
            .partial_cmp(&activity[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut targeted = vec![false; n];
    for &i in order.iter().take(count) {
        targeted[i] = true;
    }

    let power_ratio = 10f64.powf(-snr_db / 10.0);
    let mut rng = rng_from(seed, "noise-injection");
    let samples = dataset
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if !targeted[i] {
                return s.clone();
            }
            let signal_power =
                s.values.iter().map(|v| v * v).sum::<f64>() / s.values.len() as f64;
            let sigma = (signal_power * power_ratio).sqrt();
            let mut out = s.clone();
            if sigma > 0.0 {
                let normal = Normal::new(0.0, sigma).unwrap();
                for v in &mut out.values {
                    *v += normal.sample(&mut rng);
                }
            }
            out
        })
        .collect();
    Ok(Dataset {
        samples,
        n_classes: dataset.n_classes,
        name: dataset.name.clone(),
    })
}

/// Drop timesteps independently with probability `drop_prob`, keeping the
/// surviving timestamps. The first point is always retained so T >= 1.
pub fn make_irregular(dataset: &Dataset, drop_prob: f64, seed: u64) -> Result<Dataset> {
    if !(0.0..1.0).contains(&drop_prob) {
        return Err(Error::InvalidArgument {
            name: "drop_prob",
            message: format!("must be in [0, 1), got {drop_prob}"),
        });
    }
    let mut rng = rng_from(seed, "irregular-sampling");
    let samples = dataset
        .samples
        .iter()
        .map(|s| {
            let mut values = Vec::new();
            let mut timestamps = Vec::new();
            for t in 0..s.steps {
                let keep = t == 0 || rng.random::<f64>() >= drop_prob;
                if keep {
                    values.extend_from_slice(&s.values[t * s.dims..(t + 1) * s.dims]);
                    timestamps.push(s.timestamps[t]);
                }
            }
            let steps = timestamps.len();
            TimeSeriesSample::new(values, steps, s.dims, timestamps, s.label)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset {
        samples,
        n_classes: dataset.n_classes,
        name: dataset.name.clone(),
    })
}

/// Per-class sample counts, used by stratified fold splitting and reports.
pub fn class_histogram(dataset: &Dataset) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for s in &dataset.samples {
        *hist.entry(s.label).or_insert(0) += 1;
    }
    hist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_row_file() {
        let d = parse_ucr_tsv("1\t0.0\t1.0\n2\t1.0\t0.0\n", "mem").unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.n_classes, 2);
        assert_eq!(d.samples[0].label, 0);
        assert_eq!(d.samples[1].label, 1);
        assert_eq!(d.samples[0].steps, 2);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(parse_ucr_tsv("", "mem").is_err());
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let err = parse_ucr_tsv("1\t0.0\n2\tx\n", "mem").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn inconsistent_lengths_rejected() {
        let err = parse_ucr_tsv("1\t0.0\t1.0\n2\t1.0\n", "mem").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn coffee_style_labels_remap_to_two_classes() {
        // Two original label values, remapped to {0, 1} in sorted order.
        let d = parse_ucr_tsv("2\t0.5\t0.1\n1\t0.2\t0.9\n2\t0.4\t0.4\n", "Coffee_TRAIN").unwrap();
        assert_eq!(d.n_classes, 2);
        assert_eq!(d.samples[0].label, 1);
        assert_eq!(d.samples[1].label, 0);
    }

    #[test]
    fn save_load_round_trip_is_identical() {
        let d = generate_synthetic(SyntheticKind::two_class_freq(0.05), 4, 16, 9).unwrap();
        let dir = std::env::temp_dir().join(format!("spikecl_rt_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rt.tsv");
        save_ucr_tsv(&d, &path).unwrap();
        let loaded = load_ucr_tsv(&path).unwrap();
        assert_eq!(loaded.samples.len(), d.samples.len());
        for (a, b) in loaded.samples.iter().zip(&d.samples) {
            assert_eq!(a.values, b.values);
            assert_eq!(a.label, b.label);
        }
        save_ucr_tsv(&loaded, &path).unwrap();
        let again = load_ucr_tsv(&path).unwrap();
        assert_eq!(again, loaded);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn noise_power_is_one_percent_at_20db() {
        assert!((10f64.powf(-20.0 / 10.0) - 0.01).abs() < 1e-15);
        // Empirical noise power within 10% of target for T >= 128.
        let values: Vec<f64> = (0..512).map(|t| (t as f64 * 0.1).sin() + 1.5).collect();
        let s = TimeSeriesSample::univariate(values, 0).unwrap();
        let d = Dataset::new(vec![s], 1, "t").unwrap();
        let noisy = inject_noise(&d, 1.0, 20.0, &[1.0], 3).unwrap();
        let signal_power = d.samples[0].values.iter().map(|v| v * v).sum::<f64>()
            / d.samples[0].values.len() as f64;
        let noise_power = d.samples[0]
            .values
            .iter()
            .zip(&noisy.samples[0].values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            / d.samples[0].values.len() as f64;
        let target = signal_power * 0.01;
        assert!(
            (noise_power - target).abs() / target < 0.1,
            "noise power {noise_power} vs target {target}"
        );
    }

    #[test]
    fn noise_targets_exact_count() {
        let d = generate_synthetic(SyntheticKind::two_class_freq(0.0), 50, 8, 4).unwrap();
        assert_eq!(d.len(), 100);
        let activity: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let noisy = inject_noise(&d, 0.2, 0.0, &activity, 5).unwrap();
        let changed = d
            .samples
            .iter()
            .zip(&noisy.samples)
            .filter(|(a, b)| a.values != b.values)
            .count();
        assert_eq!(changed, 20);
        // The top-20 by activity are the last 20 indices.
        for i in 0..80 {
            assert_eq!(d.samples[i].values, noisy.samples[i].values);
        }
    }

    #[test]
    fn infinite_snr_leaves_data_unchanged() {
        let d = generate_synthetic(SyntheticKind::two_class_freq(0.0), 3, 8, 4).unwrap();
        let activity = vec![0.5; d.len()];
        let noisy = inject_noise(&d, 1.0, f64::INFINITY, &activity, 5).unwrap();
        assert_eq!(noisy, d);
    }

    #[test]
    fn irregular_identity_and_determinism() {
        let d = generate_synthetic(SyntheticKind::cbf_like(0.1), 3, 32, 11).unwrap();
        let same = make_irregular(&d, 0.0, 1).unwrap();
        assert_eq!(same, d);
        let a = make_irregular(&d, 0.5, 7).unwrap();
        let b = make_irregular(&d, 0.5, 7).unwrap();
        assert_eq!(a, b);
        for s in &a.samples {
            assert!(s.steps >= 1);
            assert!(s.timestamps.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn minmax_normalizes_to_unit_interval() {
        let d = Dataset::new(
            vec![
                TimeSeriesSample::univariate(vec![-2.0, 0.0, 2.0], 0).unwrap(),
                TimeSeriesSample::univariate(vec![1.0, 2.0, 6.0], 0).unwrap(),
            ],
            1,
            "t",
        )
        .unwrap();
        let norm = MinMaxNorm::fit(&d).unwrap();
        let scaled = norm.apply(&d);
        assert_eq!(scaled.samples[0].values[0], 0.0);
        assert_eq!(scaled.samples[1].values[2], 1.0);
        assert!(scaled
            .samples
            .iter()
            .flat_map(|s| &s.values)
            .all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn constant_dataset_cannot_be_normalized() {
        let d = Dataset::new(
            vec![TimeSeriesSample::univariate(vec![3.0, 3.0], 0).unwrap()],
            1,
            "t",
        )
        .unwrap();
        assert!(MinMaxNorm::fit(&d).is_err());
    }

    #[test]
    fn multivariate_csv_dir_round_trip() {
        let dir = std::env::temp_dir().join(format!("spikecl_csv_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("labels.csv"), "file,label\na.csv,1\nb.csv,2\n").unwrap();
        std::fs::write(
            dir.join("a.csv"),
            "timestamp,v1,v2\n0.0,1.0,2.0\n1.5,3.0,4.0\n",
        )
        .unwrap();
        std::fs::write(dir.join("b.csv"), "timestamp,v1,v2\n0.0,5.0,6.0\n2.0,7.0,8.0\n").unwrap();
        let d = load_multivariate_csv_dir(&dir).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.samples[0].dims, 2);
        assert_eq!(d.samples[0].scalar_at(0), 1.5);
        assert_eq!(d.samples[0].timestamps, vec![0.0, 1.5]);
        assert_eq!(d.samples[1].label, 1);
        std::fs::remove_dir_all(&dir).ok();
    }
}
