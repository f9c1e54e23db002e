mod support;

use brouwer_core::choose2;
use brouwer_core::conjecture::brouwer_report;
use brouwer_core::ensembles::{EnsembleSpec, Family, SeedSpec};
use brouwer_core::experiments::{
    concentration_study, edge_weight_tail_study, enumerate_graphs, enumerate_graphs_with, graph_from_mask,
    lexicographic_pairs, run_trials, run_trials_with, EnumerationOptions, EnumerationState, FamilySchedule,
};
use brouwer_core::spectral::Spectrum;

fn jsonl<T: serde::Serialize>(items: &[T]) -> String {
    items.iter().map(|r| serde_json::to_string(r).unwrap() + "\n").collect()
}

#[test]
fn trials_are_independent_of_worker_count() {
    let spec = EnsembleSpec::new(Family::Uniform { a: -0.5, b: 1.0 }, 25).unwrap();
    let (s1, r1) = run_trials(&spec, 300, 42, Some(1)).unwrap();
    let (s3, r3) = run_trials(&spec, 300, 42, Some(3)).unwrap();
    assert_eq!(jsonl(&r1), jsonl(&r3));
    assert_eq!(serde_json::to_string(&s1).unwrap(), serde_json::to_string(&s3).unwrap());
    let (_, other) = run_trials(&spec, 300, 43, Some(1)).unwrap();
    assert_ne!(jsonl(&r1), jsonl(&other));
}

#[test]
fn records_stream_in_trial_order_and_summary_agrees() {
    let spec = EnsembleSpec::new(Family::ShiftedRademacher { mu: 0.05 }, 30).unwrap();
    let mut seen = Vec::new();
    let (summary, records) = run_trials_with(&spec, 600, 5, Some(2), |r| {
        seen.push(r.t);
        Ok(())
    })
    .unwrap();
    assert_eq!(seen, (0..600).collect::<Vec<_>>());
    assert!(summary.failures.is_empty());
    let violations = records.iter().filter(|r| !r.holds).count() as u64;
    assert_eq!(summary.violations, violations);
    assert!((summary.empirical_prob + violations as f64 / summary.trials as f64 - 1.0).abs() < 1e-15);
    for r in &records {
        let report = brouwer_report(&spec.sample_graph(SeedSpec::new(5, r.t))).unwrap();
        assert_eq!(r.holds, report.holds);
        assert_eq!((r.min_margin_k, r.min_margin), report.worst());
        assert_eq!(r.e_g, report.e_g);
    }
}

#[test]
fn bernoulli_half_n50_has_no_violations() {
    let spec = EnsembleSpec::new(Family::Bernoulli { p: 0.5 }, 50).unwrap();
    let (summary, _) = run_trials(&spec, 200, 11, None).unwrap();
    assert_eq!(summary.violations, 0);
    assert_eq!(summary.empirical_prob, 1.0);
    assert!(summary.analytic_lower_bound.unwrap() > 0.99);
}

#[test]
fn enumeration_counts() {
    for (n, total) in [(1, 1), (2, 2), (3, 8), (4, 64), (5, 1024)] {
        let s = enumerate_graphs(n).unwrap();
        assert_eq!(s.total(), total);
        assert_eq!(s.total(), 1u64 << choose2(n as u64));
        assert!(s.is_complete());
        assert_eq!((s.violations, s.failures), (0, 0), "n = {n}");
    }
}

#[test]
fn enumeration_minimum_matches_oracle() {
    for n in 2..=4 {
        let s = enumerate_graphs(n).unwrap();
        let pairs = lexicographic_pairs(n);
        let mut best = (f64::INFINITY, 0u64);
        for mask in 0..1u64 << pairs.len() {
            let g = graph_from_mask(n, &pairs, mask);
            let oracle = Spectrum::from_unsorted(support::oracle_eigenvalues(n, g.laplacian().as_slice()));
            let worst = (1..=n)
                .map(|k| g.total_weight() + choose2(k as u64 + 1) as f64 - oracle.partial_sum(k))
                .fold(f64::INFINITY, f64::min);
            assert!(worst >= -1e-9);
            if worst < best.0 - 1e-9 {
                best = (worst, mask);
            }
        }
        assert!((s.min_margin - best.0).abs() < 1e-7, "n = {n}");
    }
}

#[test]
fn interrupted_enumeration_resumes_to_same_result() {
    let straight = enumerate_graphs(6).unwrap();
    let mut checkpoints = Vec::new();
    let first = enumerate_graphs_with(
        6,
        &EnumerationOptions {
            limit: Some(10_000),
            workers: Some(2),
            ..Default::default()
        },
        |s| {
            checkpoints.push(s.to_checkpoint_json().unwrap());
            Ok(())
        },
    )
    .unwrap();
    assert!(!first.is_complete());
    let restored = EnumerationState::from_checkpoint_json(checkpoints.last().unwrap()).unwrap();
    assert_eq!(restored, first);
    let resumed = enumerate_graphs_with(
        6,
        &EnumerationOptions {
            resume: Some(restored),
            workers: Some(1),
            ..Default::default()
        },
        |_| Ok(()),
    )
    .unwrap();
    assert_eq!(resumed, straight);
    assert_eq!(straight.violations, 0);
}

#[test]
fn degenerate_concentration_ratio_is_one() {
    let (rows, records) = concentration_study(
        FamilySchedule::Fixed(Family::Bernoulli { p: 1.0 }),
        &[5, 12, 20],
        4,
        1,
        None,
    )
    .unwrap();
    assert_eq!(records.len(), 12);
    for row in rows {
        let q = row.ratio1.unwrap();
        for v in [q.q25, q.median, q.q75] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(row.ratio2.is_none());
    }
}

#[test]
fn concentration_rejects_tiny_n() {
    let schedule = FamilySchedule::Fixed(Family::Bernoulli { p: 0.5 });
    assert!(concentration_study(schedule, &[1], 3, 1, None).is_err());
}

#[test]
fn power_law_schedule() {
    let f = FamilySchedule::ShiftedRademacherPower { exponent: 0.9 }.at(100);
    assert!((f.mean() - 100f64.powf(-0.9)).abs() < 1e-15);
}

#[test]
fn tail_studies() {
    let spec = EnsembleSpec::new(Family::Bernoulli { p: 0.5 }, 40).unwrap();
    let s = edge_weight_tail_study(&spec, 0.2, 2000, 17, None).unwrap();
    assert!(s.empirical_tail <= s.slack(3.0), "{s:?}");
    let far = edge_weight_tail_study(&spec, 0.99, 500, 17, None).unwrap();
    assert_eq!(far.hits, 0);
    let constant = EnsembleSpec::new(Family::Bernoulli { p: 1.0 }, 40).unwrap();
    assert_eq!(edge_weight_tail_study(&constant, 0.1, 100, 1, None).unwrap().hits, 0);
    assert!(edge_weight_tail_study(&spec, 1.0, 10, 1, None).is_err());
}
