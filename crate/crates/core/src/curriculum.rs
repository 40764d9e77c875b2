//! Sample scoring, pacing, and schedule construction for curriculum
//! training, plus numerical checks of the covariance identity and the
//! optimality inequalities the ordering relies on.
//!
//! Scores are the softmax of negated losses, so low-loss (active) samples
//! score high. The empirical-expectation convention throughout is the
//! mean: E[U] = (1/N) sum U_i, with the uniform prior 1/N as the
//! covariance reference — the unique convention under which the identity
//! checked by [`check_theorem2`] is exact.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from;

/// Per-sample curriculum scores: a probability vector over samples built
/// from their latest losses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub source_losses: Vec<f64>,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn variance(&self) -> f64 {
        variance(&self.scores)
    }
}

/// Softmax of negated losses: p_i = e^(-L_i) / sum_j e^(-L_j).
/// Shift-by-minimum keeps the exponentials in range and leaves the result
/// exactly invariant to adding a constant to every loss.
pub fn score(losses: &[f64]) -> Result<ScoreVector> {
    if losses.is_empty() {
        return Err(Error::InvalidArgument {
            name: "losses",
            message: "cannot score an empty loss vector".into(),
        });
    }
    if losses.iter().any(|l| !l.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "losses",
            message: "losses must be finite".into(),
        });
    }
    let min = losses.iter().cloned().fold(f64::INFINITY, f64::min);
    let exps: Vec<f64> = losses.iter().map(|l| (-(l - min)).exp()).collect();
    let total: f64 = exps.iter().sum();
    Ok(ScoreVector {
        scores: exps.iter().map(|e| e / total).collect(),
        source_losses: losses.to_vec(),
    })
}

/// Exponential pacing schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacingConfig {
    /// Starting fraction of the dataset, in (0, 1].
    pub start_percent: f64,
    /// Training steps between size increases.
    pub step_length: usize,
    /// Total sample count N.
    pub n_samples: usize,
}

impl PacingConfig {
    pub fn new(start_percent: f64, step_length: usize, n_samples: usize) -> Result<Self> {
        if !(start_percent > 0.0 && start_percent <= 1.0) {
            return Err(Error::InvalidArgument {
                name: "start_percent",
                message: format!("must be in (0, 1], got {start_percent}"),
            });
        }
        if step_length == 0 {
            return Err(Error::InvalidArgument {
                name: "step_length",
                message: "must be positive".into(),
            });
        }
        if n_samples == 0 || start_percent * (n_samples as f64) < 1.0 {
            return Err(Error::InvalidArgument {
                name: "n_samples",
                message: format!(
                    "start_percent * N must be >= 1 (got {})",
                    start_percent * n_samples as f64
                ),
            });
        }
        Ok(PacingConfig {
            start_percent,
            step_length,
            n_samples,
        })
    }

    /// First step at which the subset covers the whole dataset.
    pub fn saturation_step(&self) -> usize {
        let mut m = 0;
        while pace(m, self) < self.n_samples {
            m += self.step_length;
        }
        m
    }
}

/// Subset size at training step m:
/// floor(min(start_percent * (1 + floor(m / step_length)), 1) * N),
/// floored at 1.
pub fn pace(m: usize, config: &PacingConfig) -> usize {
    let growth = 1.0 + (m / config.step_length) as f64;
    let fraction = (config.start_percent * growth).min(1.0);
    let size = (fraction * config.n_samples as f64).floor() as usize;
    size.clamp(1, config.n_samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurriculumMode {
    /// Most active (highest score) first.
    A2D,
    /// Dormant first: the reverse of A2D.
    D2A,
    /// Seeded shuffle.
    Random,
    /// Easiest (lowest loss) first; coincides with A2D ordering since
    /// scores decrease in loss. Kept distinct for reporting.
    E2H,
    /// Hardest first.
    H2E,
}

impl CurriculumMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurriculumMode::A2D => "a2d",
            CurriculumMode::D2A => "d2a",
            CurriculumMode::Random => "random",
            CurriculumMode::E2H => "e2h",
            CurriculumMode::H2E => "h2e",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2d" => Ok(CurriculumMode::A2D),
            "d2a" => Ok(CurriculumMode::D2A),
            "random" => Ok(CurriculumMode::Random),
            "e2h" => Ok(CurriculumMode::E2H),
            "h2e" => Ok(CurriculumMode::H2E),
            other => Err(Error::InvalidArgument {
                name: "mode",
                message: format!("unknown curriculum mode `{other}`"),
            }),
        }
    }
}

/// A full-run schedule: the sample order plus the subset size at every
/// training step up to pacing saturation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurriculumSchedule {
    pub order: Vec<usize>,
    pub sizes: Vec<usize>,
    pub mode: CurriculumMode,
}

impl CurriculumSchedule {
    /// Subset size at step m; constant at N beyond saturation.
    pub fn size_at(&self, m: usize) -> usize {
        if m < self.sizes.len() {
            self.sizes[m]
        } else {
            *self.sizes.last().unwrap()
        }
    }

    /// The training prefix at step m.
    pub fn prefix_at(&self, m: usize) -> &[usize] {
        &self.order[..self.size_at(m)]
    }

    /// Plain-text audit listing: `index score size` per sample position.
    pub fn to_audit_text(&self, scores: &ScoreVector) -> String {
        let mut out = String::from("# position\tsample_index\tscore\tstep_size\n");
        for (pos, &idx) in self.order.iter().enumerate() {
            let size = self.size_at(pos.min(self.sizes.len() - 1));
            out.push_str(&format!("{pos}\t{idx}\t{}\t{size}\n", scores.scores[idx]));
        }
        out
    }
}

/// Build a schedule from scores. A2D sorts by descending score, D2A
/// ascending, E2H by ascending loss, H2E descending, Random shuffles with
/// the seed. Ties break on the original index, so sorting is stable.
pub fn build_schedule(
    scores: &ScoreVector,
    mode: CurriculumMode,
    config: &PacingConfig,
    seed: u64,
) -> Result<CurriculumSchedule> {
    let n = scores.len();
    if n == 0 {
        return Err(Error::InvalidArgument {
            name: "scores",
            message: "cannot schedule an empty score vector".into(),
        });
    }
    if config.n_samples != n {
        return Err(Error::DimensionMismatch {
            context: "pacing config",
            expected: n,
            actual: config.n_samples,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    match mode {
        CurriculumMode::A2D => {
            order.sort_by(|&a, &b| scores.scores[b].partial_cmp(&scores.scores[a]).unwrap());
        }
        CurriculumMode::D2A => {
            order.sort_by(|&a, &b| scores.scores[a].partial_cmp(&scores.scores[b]).unwrap());
        }
        CurriculumMode::E2H => {
            order.sort_by(|&a, &b| {
                scores.source_losses[a]
                    .partial_cmp(&scores.source_losses[b])
                    .unwrap()
            });
        }
        CurriculumMode::H2E => {
            order.sort_by(|&a, &b| {
                scores.source_losses[b]
                    .partial_cmp(&scores.source_losses[a])
                    .unwrap()
            });
        }
        CurriculumMode::Random => {
            let mut rng = rng_from(seed, "schedule-shuffle");
            order.shuffle(&mut rng);
        }
    }
    let saturation = config.saturation_step();
    let sizes: Vec<usize> = (0..=saturation).map(|m| pace(m, config)).collect();
    Ok(CurriculumSchedule { order, sizes, mode })
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn variance(values: &[f64]) -> f64 {
    let mu = mean(values);
    values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / values.len() as f64
}

/// Sum-convention covariance: sum (u - mean u)(v - mean v).
fn cov_sum(u: &[f64], v: &[f64]) -> f64 {
    let mu = mean(u);
    let mv = mean(v);
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - mu) * (b - mv))
        .sum::<f64>()
}

/// Result of one covariance-identity evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Covariance identity: the prior-weighted objective equals the plain mean
/// plus the covariance against the prior's deviation from uniform,
///   sum_i U_i p_i = mean(U) + sum_i (U_i - mean U)(p_i - 1/N).
pub fn check_theorem2(u_values: &[f64], p: &[f64]) -> Result<IdentityCheck> {
    if u_values.len() != p.len() || u_values.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "identity check",
            expected: u_values.len().max(1),
            actual: p.len(),
        });
    }
    let total_p: f64 = p.iter().sum();
    if (total_p - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument {
            name: "p",
            message: format!("prior must sum to 1, got {total_p}"),
        });
    }
    let n = u_values.len() as f64;
    let lhs: f64 = u_values.iter().zip(p).map(|(u, pi)| u * pi).sum();
    let u_mean = mean(u_values);
    let cov: f64 = u_values
        .iter()
        .zip(p)
        .map(|(u, pi)| (u - u_mean) * (pi - 1.0 / n))
        .sum();
    let rhs = u_mean + cov;
    Ok(IdentityCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// Outcome of checking the ordering claims on one hypothesis grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCheck {
    /// Index of the hypothesis maximizing the plain objective.
    pub best_plain: usize,
    /// Index maximizing the prior-weighted objective.
    pub best_weighted: usize,
    /// Whether every hypothesis satisfied Cov[U, U*] <= Var[U*].
    pub side_condition_holds: bool,
    /// Claim (a): the same hypothesis maximizes both objectives.
    pub argmax_agrees: bool,
    /// Claim (b): the weighted gap dominates the plain gap for every
    /// hypothesis; carries the worst violation margin if any.
    pub gap_inequality_holds: bool,
    pub worst_gap_violation: f64,
    /// Hypotheses violating claim (b), if any.
    pub violating_hypotheses: Vec<usize>,
}

/// Check both ordering claims on a hypothesis grid. Each row of the grid
/// holds one hypothesis' per-sample objective values U_theta(X_i) > 0. The
/// prior is the best hypothesis' values normalized to sum 1. Claims are
/// evaluated regardless of the side condition; the caller filters.
pub fn check_theorem3(grid: &[Vec<f64>]) -> Result<GridCheck> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument {
            name: "grid",
            message: "hypothesis grid must be non-empty".into(),
        });
    }
    let n = grid[0].len();
    if n == 0 || grid.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "hypothesis grid",
            expected: n.max(1),
            actual: grid.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(0),
        });
    }

    // Plain objective: empirical mean of U.
    let plain: Vec<f64> = grid.iter().map(|row| mean(row)).collect();
    let best_plain = argmax(&plain);

    // Prior from the best hypothesis (normalized U*, the maximum-likelihood
    // form of the activity prior).
    let best_row = &grid[best_plain];
    let total: f64 = best_row.iter().sum();
    let prior: Vec<f64> = best_row.iter().map(|u| u / total).collect();

    // Weighted objective: expectation of U under the prior.
    let weighted: Vec<f64> = grid
        .iter()
        .map(|row| row.iter().zip(&prior).map(|(u, p)| u * p).sum())
        .collect();
    let best_weighted = argmax(&weighted);

    let var_best = cov_sum(best_row, best_row);
    let side_condition_holds = grid
        .iter()
        .all(|row| cov_sum(row, best_row) <= var_best + 1e-12);

    let mut worst_gap_violation = 0.0f64;
    let mut violating_hypotheses = Vec::new();
    for (k, _) in grid.iter().enumerate() {
        let weighted_gap = weighted[best_plain] - weighted[k];
        let plain_gap = plain[best_plain] - plain[k];
        let violation = plain_gap - weighted_gap;
        if violation > 1e-12 {
            violating_hypotheses.push(k);
            worst_gap_violation = worst_gap_violation.max(violation);
        }
    }

    Ok(GridCheck {
        best_plain,
        best_weighted,
        side_condition_holds,
        argmax_agrees: best_plain == best_weighted,
        gap_inequality_holds: violating_hypotheses.is_empty(),
        worst_gap_violation,
        violating_hypotheses,
    })
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceCheck {
    pub var_a: f64,
    pub var_b: f64,
    /// Var under the wider score set dominates.
    pub holds: bool,
    /// Informational: covariance of each extra hypothesis against the
    /// reconstructed objective under A and B.
    pub cov_trend: Vec<(f64, f64)>,
}

/// Wider score spread means wider objective spread: with U* = P * p for a
/// shared normalizer P, Var[U*] under the higher-variance score vector
/// dominates. `u_matrix` rows are optional extra hypotheses whose
/// covariance against U* is reported for the declining-covariance trend.
pub fn check_theorem4(
    scores_a: &ScoreVector,
    scores_b: &ScoreVector,
    u_matrix: &[Vec<f64>],
) -> Result<VarianceCheck> {
    if scores_a.len() != scores_b.len() || scores_a.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "score vectors",
            expected: scores_a.len().max(1),
            actual: scores_b.len(),
        });
    }
    // Matched normalizer: reconstruct U* = P * p with the same P for both.
    let p_norm: f64 = scores_a
        .source_losses
        .iter()
        .map(|l| (-l).exp())
        .sum::<f64>();
    let u_a: Vec<f64> = scores_a.scores.iter().map(|p| p_norm * p).collect();
    let u_b: Vec<f64> = scores_b.scores.iter().map(|p| p_norm * p).collect();
    let var_a = variance(&u_a);
    let var_b = variance(&u_b);
    let holds = if scores_a.variance() >= scores_b.variance() {
        var_a >= var_b - 1e-15
    } else {
        var_b >= var_a - 1e-15
    };
    let cov_trend = u_matrix
        .iter()
        .filter(|row| row.len() == u_a.len())
        .map(|row| (cov_sum(row, &u_a), cov_sum(row, &u_b)))
        .collect();
    Ok(VarianceCheck {
        var_a,
        var_b,
        holds,
        cov_trend,
    })
}

/// Spread of per-hypothesis variances across a grid; reported rather than
/// asserted because "roughly constant" carries no tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceSpread {
    pub min_var: f64,
    pub max_var: f64,
    pub ratio: f64,
}

pub fn proposition1_variance_spread(grid: &[Vec<f64>]) -> Result<VarianceSpread> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument {
            name: "grid",
            message: "hypothesis grid must be non-empty".into(),
        });
    }
    let vars: Vec<f64> = grid.iter().map(|row| variance(row)).collect();
    let min_var = vars.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_var = vars.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(VarianceSpread {
        min_var,
        max_var,
        ratio: if min_var > 0.0 { max_var / min_var } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_losses_give_uniform_scores() {
        let s = score(&[0.0, 0.0, 0.0]).unwrap();
        for p in &s.scores {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn score_example_two_thirds() {
        let s = score(&[0.0, (2.0f64).ln()]).unwrap();
        assert!((s.scores[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.scores[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn scores_are_shift_invariant() {
        let a = score(&[0.3, 1.2, 0.7, 2.0]).unwrap();
        let b = score(&[0.3 + 5.0, 1.2 + 5.0, 0.7 + 5.0, 2.0 + 5.0]).unwrap();
        for (x, y) in a.scores.iter().zip(&b.scores) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn scores_are_anti_monotone_in_loss() {
        let losses = [0.1, 0.9, 0.5, 0.2];
        let s = score(&losses).unwrap();
        for i in 0..losses.len() {
            for j in 0..losses.len() {
                if losses[i] < losses[j] {
                    assert!(s.scores[i] > s.scores[j]);
                }
            }
        }
        let total: f64 = s.scores.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pacing_closed_form_examples() {
        let c = PacingConfig::new(0.05, 50, 1000).unwrap();
        assert_eq!(pace(0, &c), 50);
        assert_eq!(pace(49, &c), 50);
        assert_eq!(pace(50, &c), 100);
        let full = PacingConfig::new(1.0, 10, 77).unwrap();
        for m in 0..100 {
            assert_eq!(pace(m, &full), 77);
        }
        // Saturation for large m.
        assert_eq!(pace(10_000_000, &c), 1000);
    }

    #[test]
    fn schedule_ordering_examples() {
        let s = ScoreVector {
            scores: vec![0.5, 0.3, 0.2],
            source_losses: vec![0.1, 0.6, 1.0],
        };
        let c = PacingConfig::new(0.5, 2, 3).unwrap();
        let a2d = build_schedule(&s, CurriculumMode::A2D, &c, 1).unwrap();
        assert_eq!(a2d.order, vec![0, 1, 2]);
        let d2a = build_schedule(&s, CurriculumMode::D2A, &c, 1).unwrap();
        assert_eq!(d2a.order, vec![2, 1, 0]);
        // Sizes are non-decreasing and end at N.
        assert!(a2d.sizes.windows(2).all(|w| w[1] >= w[0]));
        assert_eq!(*a2d.sizes.last().unwrap(), 3);
    }

    #[test]
    fn equal_scores_keep_original_order() {
        let s = ScoreVector {
            scores: vec![0.25; 4],
            source_losses: vec![1.0; 4],
        };
        let c = PacingConfig::new(1.0, 1, 4).unwrap();
        let a2d = build_schedule(&s, CurriculumMode::A2D, &c, 1).unwrap();
        assert_eq!(a2d.order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn d2a_mirrors_a2d_under_distinct_scores() {
        let s = score(&[0.9, 0.1, 0.5, 0.7, 0.2]).unwrap();
        let c = PacingConfig::new(0.4, 3, 5).unwrap();
        let a2d = build_schedule(&s, CurriculumMode::A2D, &c, 9).unwrap();
        let d2a = build_schedule(&s, CurriculumMode::D2A, &c, 9).unwrap();
        let mut reversed = a2d.order.clone();
        reversed.reverse();
        assert_eq!(d2a.order, reversed);
    }

    #[test]
    fn schedule_is_a_permutation() {
        let s = score(&[0.4, 0.1, 0.8, 0.3]).unwrap();
        let c = PacingConfig::new(0.3, 2, 4).unwrap();
        for mode in [
            CurriculumMode::A2D,
            CurriculumMode::D2A,
            CurriculumMode::Random,
            CurriculumMode::E2H,
            CurriculumMode::H2E,
        ] {
            let sch = build_schedule(&s, mode, &c, 5).unwrap();
            let mut sorted = sch.order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn identity_hand_example() {
        let r = check_theorem2(&[1.0, 2.0, 3.0], &[0.2, 0.3, 0.5]).unwrap();
        assert!((r.lhs - 2.3).abs() < 1e-12);
        assert!((r.rhs - 2.3).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn identity_uniform_prior_gives_plain_mean() {
        let u = [4.0, 8.0, 6.0, 2.0];
        let r = check_theorem2(&u, &[0.25; 4]).unwrap();
        assert!((r.lhs - 5.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn identity_constant_u_ignores_prior() {
        let r = check_theorem2(&[3.0, 3.0, 3.0], &[0.7, 0.2, 0.1]).unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn single_hypothesis_grid_is_trivially_consistent() {
        let check = check_theorem3(&[vec![0.5, 0.8, 0.2]]).unwrap();
        assert!(check.argmax_agrees);
        assert!(check.gap_inequality_holds);
    }

    /// A constructed grid violating the side condition where the weighted
    /// argmax flips away from the plain argmax. Recorded, not asserted as a
    /// theorem failure: it shows the condition is needed.
    #[test]
    fn side_condition_violation_can_flip_the_argmax() {
        let grid = vec![vec![10.0, 0.0, 2.0], vec![11.9, 0.0, 0.0]];
        let check = check_theorem3(&grid).unwrap();
        assert!(!check.side_condition_holds);
        assert!(!check.argmax_agrees);
    }

    #[test]
    fn variance_check_identical_sets_tie() {
        let s = score(&[0.2, 0.5, 0.9]).unwrap();
        let r = check_theorem4(&s, &s, &[]).unwrap();
        assert!((r.var_a - r.var_b).abs() < 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn mean_preserving_spread_raises_variance() {
        let b = ScoreVector {
            scores: vec![0.25; 4],
            source_losses: vec![1.0; 4],
        };
        let a = ScoreVector {
            scores: vec![0.35, 0.15, 0.35, 0.15],
            source_losses: vec![0.8, 1.2, 0.8, 1.2],
        };
        let r = check_theorem4(&a, &b, &[]).unwrap();
        assert!(r.var_a > r.var_b);
        assert!(r.holds);
    }

    #[test]
    fn one_hot_versus_uniform_is_the_extreme_gap() {
        let n = 5;
        let mut one_hot = vec![0.0; n];
        one_hot[2] = 1.0;
        let a = ScoreVector {
            scores: one_hot,
            source_losses: vec![0.0; n],
        };
        let b = ScoreVector {
            scores: vec![1.0 / n as f64; n],
            source_losses: vec![0.0; n],
        };
        let r = check_theorem4(&a, &b, &[]).unwrap();
        assert!(r.var_a > r.var_b);
        assert!((r.var_b - 0.0).abs() < 1e-15);
    }

    #[test]
    fn audit_text_lists_every_sample() {
        let s = score(&[0.1, 0.7, 0.4]).unwrap();
        let c = PacingConfig::new(0.5, 2, 3).unwrap();
        let sch = build_schedule(&s, CurriculumMode::A2D, &c, 1).unwrap();
        let text = sch.to_audit_text(&s);
        assert_eq!(text.lines().count(), 4); // header + 3 samples
    }
}
