//! Executable verification suite: numerical checks of the scheduling
//! identities, the order-dependence construction, event-driven decay
//! equivalence, the pacing closed form, firing-rate linearity, and the
//! gradient oracle. Each check reports pass/fail plus a one-line detail;
//! informational checks carry no verdict.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::curriculum::{
    check_theorem2, check_theorem3, check_theorem4, proposition1_variance_spread, score,
    PacingConfig,
};
use crate::error::Result;
use crate::harness::{firing_rate_study, FiringStudyConfig};
use crate::learning::gradient_check;
use crate::rng::rng_from;
use crate::spiking::{
    decay_to, step_layer, theorem1_demo, LayerState, LayerWeights, NeuronParams, OrderDemoConfig,
    V0Mode,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// `None` marks an informational entry.
    pub passed: Option<bool>,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: Some(true),
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: Some(false),
            detail,
        }
    }

    fn verdict(name: &str, ok: bool, detail: String) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }

    fn info(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: None,
            detail,
        }
    }
}

/// The canonical order-dependence fixture: mean 1.0, threshold 0.7 inside
/// (mu/2, mu), post-fire mean 1.6 so the updated half-sequence also fires.
pub fn order_demo_fixture() -> OrderDemoConfig {
    OrderDemoConfig {
        l: 8,
        mu: 1.0,
        sigma: 0.05,
        mu_prime: 1.6,
        v_th: 0.7,
        seed: 7,
    }
}

pub fn check_order_dependence() -> Result<CheckOutcome> {
    let outcome = theorem1_demo(&order_demo_fixture())?;
    let ok = outcome.order_a_output == vec![1, 1]
        && outcome.order_b_output == vec![0, 1]
        && outcome.differ;
    Ok(CheckOutcome::verdict(
        "order_dependence",
        ok,
        format!(
            "O_0=({},{}) O_1=({},{}) differ={}",
            outcome.order_a_output[0],
            outcome.order_a_output[1],
            outcome.order_b_output[0],
            outcome.order_b_output[1],
            outcome.differ
        ),
    ))
}

pub fn check_covariance_identity(instances: usize) -> Result<CheckOutcome> {
    let mut rng = rng_from(1, "identity-check");
    let mut max_residual = 0.0f64;
    for _ in 0..instances {
        let n = 2 + rng.random_range(0..99);
        let u: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 10.0).collect();
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let p: Vec<f64> = raw.iter().map(|r| r / total).collect();
        let check = check_theorem2(&u, &p)?;
        max_residual = max_residual.max(check.residual);
    }
    Ok(CheckOutcome::verdict(
        "covariance_identity",
        max_residual < 1e-10,
        format!("max residual {max_residual:.3e} over {instances} draws"),
    ))
}

pub struct GridStudy {
    pub outcome: CheckOutcome,
    pub filtered: usize,
    pub total: usize,
}

/// Random hypothesis grids (5 hypotheses x 50 samples of positive
/// objective values); on every grid satisfying the side condition
/// Cov[U, U*] <= Var[U*], both ordering claims must hold.
pub fn check_ordering_claims(instances: usize) -> Result<GridStudy> {
    let mut rng = rng_from(2, "grid-check");
    let mut filtered = 0usize;
    let mut total = 0usize;
    let mut violations = 0usize;
    while filtered < instances {
        total += 1;
        let grid: Vec<Vec<f64>> = (0..5)
            .map(|_| {
                (0..50)
                    .map(|_| {
                        let loss: f64 = rng.random::<f64>() * 2.0;
                        (-loss).exp()
                    })
                    .collect()
            })
            .collect();
        let check = check_theorem3(&grid)?;
        if !check.side_condition_holds {
            continue;
        }
        filtered += 1;
        if !(check.argmax_agrees && check.gap_inequality_holds) {
            violations += 1;
        }
        if total > instances * 100 {
            break;
        }
    }
    let outcome = CheckOutcome::verdict(
        "ordering_claims",
        violations == 0 && filtered == instances,
        format!("{}/{filtered} filtered grids satisfied both claims ({total} generated)",
            filtered - violations),
    );
    Ok(GridStudy {
        outcome,
        filtered,
        total,
    })
}

/// A deterministic grid violating the side condition where the weighted
/// argmax flips; evidence the condition is required, not a failure.
pub fn side_condition_counterexample() -> Result<CheckOutcome> {
    let grid = vec![vec![10.0, 0.0, 2.0], vec![11.9, 0.0, 0.0]];
    let check = check_theorem3(&grid)?;
    Ok(CheckOutcome::info(
        "side_condition_needed",
        format!(
            "counterexample: side_condition={} argmax_agrees={} (flips without the condition)",
            check.side_condition_holds, check.argmax_agrees
        ),
    ))
}

pub fn check_variance_ordering(instances: usize) -> Result<CheckOutcome> {
    let mut rng = rng_from(3, "variance-check");
    let mut failures = 0usize;
    for _ in 0..instances {
        let n = 3 + rng.random_range(0..47);
        let losses: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 3.0).collect();
        let sharper = score(&losses)?;
        let flatter = score(&losses.iter().map(|l| l * 0.5).collect::<Vec<_>>())?;
        let check = check_theorem4(&sharper, &flatter, &[])?;
        if !check.holds {
            failures += 1;
        }
    }
    Ok(CheckOutcome::verdict(
        "variance_ordering",
        failures == 0,
        format!("{}/{instances} score pairs ordered by variance", instances - failures),
    ))
}

pub fn variance_spread_report(instances: usize) -> Result<CheckOutcome> {
    let mut rng = rng_from(4, "spread-report");
    let mut worst_ratio = 1.0f64;
    for _ in 0..instances.max(1) {
        let grid: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..50).map(|_| (-(rng.random::<f64>() * 2.0)).exp()).collect())
            .collect();
        let spread = proposition1_variance_spread(&grid)?;
        worst_ratio = worst_ratio.max(spread.ratio);
    }
    Ok(CheckOutcome::info(
        "objective_variance_spread",
        format!("max Var ratio across hypotheses {worst_ratio:.2} (reported, no threshold)"),
    ))
}

/// Closed-form decay against explicit zero-input stepping, up to 10^4
/// steps, at relative error 1e-12.
pub fn check_event_decay() -> Result<CheckOutcome> {
    let params = NeuronParams::new(20.0, 150.0, 20.0, 1e12, V0Mode::PaperFormula)?;
    let weights = LayerWeights {
        ff: crate::linalg::Mat {
            rows: 1,
            cols: 1,
            data: vec![0.5],
        },
        rec: None,
    };
    let mut start = LayerState::zeros(1, 1, false);
    start.m_trace[0] = 1.0;
    start.h_trace[0] = 0.7;
    start.r_trace[0] = 0.3;

    let mut max_rel = 0.0f64;
    let mut stepped = start.clone();
    let mut k = 0usize;
    let checkpoints = [1usize, 10, 100, 1000, 10_000];
    for &target in &checkpoints {
        while k < target {
            stepped = step_layer(&stepped, &[0.0], &params, &weights)?;
            k += 1;
        }
        let decayed = decay_to(&start, target as f64, &params)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        max_rel = max_rel.max(rel(stepped.m_trace[0], decayed.m_trace[0]));
        max_rel = max_rel.max(rel(stepped.h_trace[0], decayed.h_trace[0]));
        max_rel = max_rel.max(rel(stepped.r_trace[0], decayed.r_trace[0]));
    }
    Ok(CheckOutcome::verdict(
        "event_driven_decay",
        max_rel <= 1e-12,
        format!("max relative error {max_rel:.3e} for gaps up to 10^4 steps"),
    ))
}

/// Exhaustive agreement of the pacing function with an independent
/// integer-arithmetic evaluation of the closed form.
pub fn check_pacing_closed_form() -> Result<CheckOutcome> {
    let n = 1000usize;
    let mut checked = 0u64;
    for sp_steps in 1..=10usize {
        let sp = 0.02 * sp_steps as f64;
        for &ss in &[50usize, 100, 250, 500, 1000, 2500] {
            let config = PacingConfig::new(sp, ss, n)?;
            for m in 0..=10_000usize {
                let expected = pacing_oracle(m, sp, ss, n);
                let actual = crate::curriculum::pace(m, &config);
                if actual != expected {
                    return Ok(CheckOutcome::fail(
                        "pacing_closed_form",
                        format!("mismatch at sp={sp} ss={ss} m={m}: {actual} vs {expected}"),
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(CheckOutcome::pass(
        "pacing_closed_form",
        format!("{checked} grid points agree with direct evaluation"),
    ))
}

/// Direct evaluation of the pacing closed form via a separate arithmetic
/// route: integer growth count, saturation branch, explicit floor.
fn pacing_oracle(m: usize, sp: f64, ss: usize, n: usize) -> usize {
    let growth = 1 + m / ss;
    let fraction = sp * growth as f64;
    let size = if fraction >= 1.0 {
        n
    } else {
        (fraction * n as f64).floor() as usize
    };
    size.clamp(1, n)
}

pub fn check_rate_linearity() -> Result<CheckOutcome> {
    let grid = [0.0, 0.04, 0.08, 0.12, 0.16, 0.2];
    let report = firing_rate_study(&grid, &FiringStudyConfig::default())?;
    let ok = report.r_squared >= 0.9 && report.rates[0] == 0.0;
    Ok(CheckOutcome::verdict(
        "rate_linearity",
        ok,
        format!(
            "R^2={:.4}, rate(0)={}, slope={:.3}",
            report.r_squared, report.rates[0], report.slope
        ),
    ))
}

pub fn check_gradient_oracle() -> Result<CheckOutcome> {
    let report = gradient_check(9)?;
    Ok(CheckOutcome::verdict(
        "gradient_oracle",
        report.max_relative_error <= 1e-4,
        format!(
            "max relative error {:.3e} over {} weights",
            report.max_relative_error, report.n_parameters
        ),
    ))
}

/// Run the full verification suite. `instances` scales the Monte-Carlo
/// checks (the identity, grid, and variance studies).
pub fn run_all_checks(instances: usize) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_order_dependence()?,
        check_covariance_identity(instances)?,
        check_ordering_claims(instances)?.outcome,
        side_condition_counterexample()?,
        check_variance_ordering(instances)?,
        variance_spread_report(instances.min(100))?,
        check_event_decay()?,
        check_pacing_closed_form()?,
        check_rate_linearity()?,
        check_gradient_oracle()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_suite_passes() {
        let outcomes = run_all_checks(200).unwrap();
        for outcome in &outcomes {
            if let Some(passed) = outcome.passed {
                assert!(passed, "{}: {}", outcome.name, outcome.detail);
            }
        }
        assert!(outcomes.iter().any(|o| o.passed.is_none()));
    }

    #[test]
    fn pacing_oracle_matches_spec_examples() {
        assert_eq!(pacing_oracle(0, 0.05, 50, 1000), 50);
        assert_eq!(pacing_oracle(49, 0.05, 50, 1000), 50);
        assert_eq!(pacing_oracle(50, 0.05, 50, 1000), 100);
    }
}
