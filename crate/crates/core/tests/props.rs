//! Property tests over the core invariants: spike binarity and run
//! determinism, decay additivity, schedule well-formedness, score/loss
//! anti-monotonicity, the covariance identity on random draws, AUC against
//! the exhaustive pairwise oracle, and dataset round-trips.

use proptest::prelude::*;

use spikecl::curriculum::{build_schedule, check_theorem2, pace, score, CurriculumMode, PacingConfig};
use spikecl::data::{generate_synthetic, load_ucr_tsv, save_ucr_tsv, SyntheticKind};
use spikecl::metrics::auc_roc_binary;
use spikecl::rng::rng_from;
use spikecl::spiking::{
    decay_to, run_network, LayerState, NetworkTopology, NeuronParams, SpikeTensor, V0Mode,
    WeightInit,
};

fn params_strategy() -> impl Strategy<Value = NeuronParams> {
    (5.0f64..60.0, 80.0f64..200.0, 5.0f64..60.0, 0.2f64..3.0).prop_map(|(tm, ts, tr, vth)| {
        NeuronParams::new(tm, ts, tr, vth, V0Mode::PaperFormula).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn network_outputs_are_binary_and_deterministic(
        seed in 0u64..1000,
        steps in 1usize..24,
        params in params_strategy(),
    ) {
        let mut rng = rng_from(seed, "prop-net");
        let topo = NetworkTopology::random(
            &[3, 5, 2],
            &[true, false],
            WeightInit { mu: 0.05, sigma: 1.0 },
            &mut rng,
        ).unwrap();
        let mut input = SpikeTensor::zeros(steps, 3);
        for t in 0..steps {
            input.set(t, (t * 7 + seed as usize) % 3, 1);
        }
        let all = vec![params; 2];
        let (a, _) = run_network(&input, &topo, &all, None).unwrap();
        let (b, _) = run_network(&input, &topo, &all, None).unwrap();
        prop_assert_eq!(&a, &b);
        for t in 0..a.steps {
            for &s in a.row(t) {
                prop_assert!(s <= 1);
            }
        }
    }

    #[test]
    fn decay_chains_compose(
        d1 in 0.0f64..50.0,
        d2 in 0.0f64..50.0,
        m in 0.01f64..5.0,
        params in params_strategy(),
    ) {
        let mut state = LayerState::zeros(2, 2, false);
        state.m_trace.iter_mut().for_each(|v| *v = m);
        state.h_trace.iter_mut().for_each(|v| *v = m * 0.7);
        state.r_trace.iter_mut().for_each(|v| *v = m * 0.3);
        let chained = decay_to(&decay_to(&state, d1, &params).unwrap(), d2, &params).unwrap();
        let direct = decay_to(&state, d1 + d2, &params).unwrap();
        for (a, b) in chained.m_trace.iter().zip(&direct.m_trace) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
        for (a, b) in chained.h_trace.iter().zip(&direct.h_trace) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn schedules_are_total_permutations_with_monotone_sizes(
        losses in prop::collection::vec(0.0f64..5.0, 2..40),
        sp in 0.02f64..1.0,
        ss in 1usize..100,
        seed in 0u64..500,
        mode_idx in 0usize..5,
    ) {
        let n = losses.len();
        prop_assume!(sp * n as f64 >= 1.0);
        let scores = score(&losses).unwrap();
        let config = PacingConfig::new(sp, ss, n).unwrap();
        let mode = [
            CurriculumMode::A2D,
            CurriculumMode::D2A,
            CurriculumMode::Random,
            CurriculumMode::E2H,
            CurriculumMode::H2E,
        ][mode_idx];
        let schedule = build_schedule(&scores, mode, &config, seed).unwrap();
        let mut sorted = schedule.order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        prop_assert!(schedule.sizes.windows(2).all(|w| w[1] >= w[0]));
        prop_assert_eq!(*schedule.sizes.last().unwrap(), n);
        for m in 0..schedule.sizes.len() {
            prop_assert_eq!(schedule.sizes[m], pace(m, &config));
            prop_assert!(schedule.prefix_at(m).len() >= 1);
        }
    }

    #[test]
    fn scores_are_anti_monotone_and_normalized(
        losses in prop::collection::vec(0.0f64..10.0, 2..50),
    ) {
        let s = score(&losses).unwrap();
        let total: f64 = s.scores.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for i in 0..losses.len() {
            prop_assert!(s.scores[i] > 0.0);
            for j in 0..losses.len() {
                if losses[i] < losses[j] {
                    prop_assert!(s.scores[i] > s.scores[j]);
                }
            }
        }
    }

    #[test]
    fn covariance_identity_residual_vanishes(
        u in prop::collection::vec(0.0f64..10.0, 2..100),
        raw in prop::collection::vec(0.001f64..1.0, 2..100),
    ) {
        let n = u.len().min(raw.len());
        let u = &u[..n];
        let total: f64 = raw[..n].iter().sum();
        let p: Vec<f64> = raw[..n].iter().map(|r| r / total).collect();
        let check = check_theorem2(u, &p).unwrap();
        prop_assert!(check.residual < 1e-10, "residual {}", check.residual);
    }

    #[test]
    fn rank_auc_equals_pairwise_counting(
        scores in prop::collection::vec(0u8..6, 4..50),
        flips in prop::collection::vec(any::<bool>(), 4..50),
    ) {
        let n = scores.len().min(flips.len());
        let mut labels = flips[..n].to_vec();
        labels[0] = true;
        labels[n - 1] = false;
        let scores: Vec<f64> = scores[..n].iter().map(|&s| s as f64 / 5.0).collect();
        let auc = auc_roc_binary(&scores, &labels).unwrap();
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..n {
            if !labels[i] { continue; }
            for j in 0..n {
                if labels[j] { continue; }
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
        prop_assert_eq!(auc, wins / pairs);
    }

    #[test]
    fn dataset_round_trips_through_tsv(
        n in 2usize..6,
        t_len in 4usize..32,
        seed in 0u64..200,
    ) {
        let dataset = generate_synthetic(SyntheticKind::two_class_freq(0.1), n, t_len, seed).unwrap();
        let path = std::env::temp_dir().join(format!(
            "spikecl_prop_rt_{}_{seed}.tsv",
            std::process::id()
        ));
        save_ucr_tsv(&dataset, &path).unwrap();
        let loaded = load_ucr_tsv(&path).unwrap();
        std::fs::remove_file(&path).ok();
        prop_assert_eq!(loaded.samples.len(), dataset.samples.len());
        for (a, b) in loaded.samples.iter().zip(&dataset.samples) {
            prop_assert_eq!(&a.values, &b.values);
            prop_assert_eq!(a.label, b.label);
        }
    }
}
