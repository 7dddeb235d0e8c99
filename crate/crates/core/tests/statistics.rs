//! Monte-Carlo checks of sampled outcomes against closed-form probabilities.

use probe_grover::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn subsystem_probe_rate_matches_closed_form() {
    let sub = SubsystemDescriptor {
        id: 0,
        offset: 0,
        size: 256,
        local_marked: MarkedSet::singleton(17),
    };
    let p = success_probability(256, 1, 12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(256);
    let trials = 10_000;
    let mut ones = 0;
    for _ in 0..trials {
        let probed = run_subsystem_probe(&sub, &mut rng).unwrap();
        let p1 = probed.outcome.probe_one_probability.unwrap();
        assert!((p1 - p).abs() <= ACCUMULATED_TOL);
        if probed.outcome.probe_bit == Some(1) {
            ones += 1;
            // conditioned on 1 the register is exactly the solution
            assert!((probed.register.probability(17) - 1.0).abs() <= ALGEBRAIC_TOL);
        }
    }
    let rate = ones as f64 / trials as f64;
    assert!((rate - p).abs() <= 0.01, "rate {rate} vs {p}");
}

#[test]
fn certain_subsystem_probe() {
    let sub = SubsystemDescriptor {
        id: 3,
        offset: 12,
        size: 4,
        local_marked: MarkedSet::singleton(3),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let probed = run_subsystem_probe(&sub, &mut rng).unwrap();
    assert!((probed.outcome.probe_one_probability.unwrap() - 1.0).abs() <= ALGEBRAIC_TOL);
    assert_eq!(probed.outcome.probe_bit, Some(1));
    assert_eq!(probed.outcome.ledger.quantum_oracle_calls, 2);
    let (g, _) = recover_global(&sub, &probed, &mut rng).unwrap();
    assert_eq!(g, 15);
}

#[test]
fn summarized_probe_batch_matches_closed_form() {
    let cfg = ExperimentConfig::new(256, 1, [100], Strategy::Probe, 11).with_trials(1000);
    let summary = run_batch(&cfg).unwrap();
    let p = success_probability(256, 1, 12).unwrap();
    assert!((summary.empirical_success_rate - p).abs() <= 0.01);
    assert_eq!(summary.successes + summary.misses, summary.trials);
}

#[test]
fn large_database_success_rates() {
    for strategy in [Strategy::Probe, Strategy::SemiclassicalVerify] {
        let cfg = ExperimentConfig::new(1024, 4, [777], strategy, 1).with_trials(1000);
        let reports = run_trials(&cfg).unwrap();
        let s = summarize(&reports).unwrap();
        assert!(
            s.empirical_success_rate >= 0.995,
            "{strategy}: {}",
            s.empirical_success_rate
        );
        let want = if strategy == Strategy::Probe {
            12.0
        } else {
            32.0
        };
        let ok = reports.iter().filter(|r| r.correct);
        for r in ok {
            assert_eq!(r.total_ledger.qubits_measured as f64, want);
        }
    }
}

#[test]
fn repeat_strategy_false_agreement_rate() {
    // solutionless nu=4 sub-systems agree on 2 rounds with probability 1/4
    let cfg = ExperimentConfig::new(16, 4, [10], Strategy::SemiclassicalRepeat, 8)
        .with_repeat_rounds(2)
        .with_trials(4000);
    let reports = run_trials(&cfg).unwrap();
    let mut agree = 0;
    for r in &reports {
        assert_eq!(r.per_subsystem[2].reported_local_index, Some(2));
        assert!(r.recovered_global_indices.contains(&10));
        agree += r
            .per_subsystem
            .iter()
            .filter(|o| o.id != 2 && o.reported_local_index.is_some())
            .count();
    }
    let rate = agree as f64 / (3.0 * reports.len() as f64);
    assert!((rate - 0.25).abs() <= 0.02, "{rate}");
}

#[test]
fn comparison_table_columns() {
    let base = ExperimentConfig::new(1024, 4, [777], Strategy::Probe, 1).with_trials(200);
    let summaries: Vec<TrialSummary> = [
        Strategy::Probe,
        Strategy::SemiclassicalVerify,
        Strategy::Sequential,
    ]
    .into_iter()
    .map(|s| run_batch(&base.clone().with_strategy(s)).unwrap())
    .collect();
    let table = compare_strategies(&summaries).unwrap();
    let probe = &table[0];
    let verify = &table[1];
    let sequential = &table[2];
    assert!(probe.mean_qubits_measured <= 12.0 && probe.mean_qubits_measured > 11.9);
    assert_eq!(verify.mean_qubits_measured, 32.0);
    assert_eq!(verify.mean_classical_oracle_calls, 4.0);
    assert_eq!(probe.grover_iterations, 12.0);
    assert_eq!(sequential.grover_iterations, 25.0);
    assert_eq!(probe.decision_steps, 2.0);
}
