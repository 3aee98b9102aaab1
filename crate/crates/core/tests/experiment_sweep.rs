use taxmine_core::harness::{run_experiment, ExperimentConfig, PredicateSource, TaxonomySource};
use taxmine_core::par::Execution;
use taxmine_core::Miner;

/// 50 random taxonomies on at most six items with four random predicates
/// each, every miner, each run verified against ground truth by the runner.
#[test]
fn seeded_sweep_has_no_violations() {
    let taxonomies = (0..50u64)
        .map(|i| TaxonomySource::RandomDag {
            n: 1 + (i % 6) as usize,
            edge_prob: [0.15, 0.3, 0.5, 0.7][(i % 4) as usize],
            seed: 900 + i,
        })
        .collect();
    let mut cfg = ExperimentConfig::new(
        taxonomies,
        vec![PredicateSource::Random { seed: 77, count: 4 }],
        Miner::ALL.to_vec(),
    );
    cfg.antichain_cap = 1 << 16;
    let records = run_experiment(&cfg, None, Execution::Parallel).unwrap();
    assert_eq!(records.len(), 50 * 4 * 8);

    let mut capped = 0;
    for r in &records {
        let what = format!("{} / {} / {}", r.taxonomy, r.predicate, r.miner);
        if r.miner == "halving" && r.solutions.is_none() {
            // Too many solutions to count: halving must refuse, not guess.
            let error = r.error.as_deref().unwrap_or_default();
            assert!(error.contains("cap"), "{what}: {error}");
            capped += 1;
            continue;
        }
        assert!(r.passed, "{what}: {r:?}");
        assert!(r.bound_satisfied && r.borders_match && r.witness_ok, "{what}");
    }
    assert!(capped < 50, "halving was checked on too few instances");
}
