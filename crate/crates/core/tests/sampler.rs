mod common;

use std::collections::HashMap;

use medrank::sim::{replication_seed, ExperimentConfig};
use medrank::{
    dataset_to_string, kemeny_distance, model_pmf, run_experiment, sample, sample_incomplete, Algorithm,
    ExperimentReport, ModelSpec, Ranking, Space,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn spec(ranks: &[u32], theta: f64, space: Space) -> ModelSpec {
    ModelSpec::new(Ranking::from_ranks(ranks).unwrap(), theta, space).unwrap()
}

fn chi_square_p(observed: &[f64], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let df = (observed.len() - 1) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

fn frequencies(spec: &ModelSpec, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let pmf = model_pmf(spec).unwrap();
    let d = sample(spec, n, seed).unwrap();
    let mut counts: HashMap<Vec<u32>, f64> = HashMap::new();
    for (r, _) in d.rows() {
        *counts.entry(r.complete_ranks().unwrap()).or_default() += 1.0;
    }
    let observed = pmf.points.iter().map(|p| counts.get(p).copied().unwrap_or(0.0)).collect();
    let expected = pmf.probabilities.iter().map(|p| p * n as f64).collect();
    (observed, expected)
}

#[test]
fn pmf_normalizes_and_depends_only_on_distance() {
    for space in [Space::Full, Space::Weak] {
        for m in 1..=6 {
            for theta in [0.0, 0.1, 0.7, 3.0] {
                let s = spec(&(1..=m as u32).collect::<Vec<_>>(), theta, space);
                let pmf = model_pmf(&s).unwrap();
                let total: f64 = pmf.probabilities.iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "m={m} theta={theta}: {total}");
                let mut by_distance: HashMap<u64, f64> = HashMap::new();
                for (d, p) in pmf.distances.iter().zip(&pmf.probabilities) {
                    let q = *by_distance.entry(*d).or_insert(*p);
                    assert_eq!(q, *p);
                }
                for (point, d) in pmf.points.iter().zip(&pmf.distances) {
                    let r = Ranking::from_ranks(point).unwrap();
                    assert_eq!(kemeny_distance(s.consensus(), &r).unwrap(), *d as f64);
                }
            }
        }
    }
}

#[test]
fn consensus_is_the_unique_mode() {
    let s = spec(&[3, 1, 2, 4], 0.4, Space::Weak);
    let pmf = model_pmf(&s).unwrap();
    let top = pmf.probability_of(s.consensus()).unwrap();
    let at_top = pmf.probabilities.iter().filter(|&&p| p == top).count();
    assert_eq!(at_top, 1);
    assert!(pmf.probabilities.iter().all(|&p| p <= top));
}

#[test]
fn uniform_sampling_passes_chi_square() {
    let s = spec(&[1, 2, 3], 0.0, Space::Full);
    let (observed, expected) = frequencies(&s, 6000, 11);
    assert!(expected.iter().all(|&e| e == 1000.0));
    assert!(chi_square_p(&observed, &expected) > 0.01);
    let (observed, expected) = frequencies(&s, 10_000, 12);
    assert!(chi_square_p(&observed, &expected) > 0.01);
}

#[test]
fn model_sampling_passes_chi_square() {
    for (theta, space) in [(0.4, Space::Full), (0.7, Space::Weak), (0.1, Space::Weak)] {
        let s = spec(&[2, 1, 3], theta, space);
        let (observed, expected) = frequencies(&s, 10_000, 5);
        assert!(chi_square_p(&observed, &expected) > 0.01, "theta={theta}");
    }
}

#[test]
fn sampling_is_reproducible() {
    let s = spec(&[1, 2, 3, 4, 5], 0.4, Space::Weak);
    let a = dataset_to_string(&sample(&s, 300, 42).unwrap());
    assert_eq!(a, dataset_to_string(&sample(&s, 300, 42).unwrap()));
    assert_ne!(a, dataset_to_string(&sample(&s, 300, 43).unwrap()));
    let b = dataset_to_string(&sample_incomplete(9, 5, 42).unwrap());
    assert_eq!(b, dataset_to_string(&sample_incomplete(9, 5, 42).unwrap()));
}

#[test]
fn incomplete_rows_are_distinct_picks() {
    for (m, k) in [(4, 2), (9, 5), (15, 10)] {
        for seed in 0..5 {
            let d = sample_incomplete(m, k, seed).unwrap();
            let total = d.total_weight();
            assert!((199.0..=201.0).contains(&total));
            let mut seen = std::collections::HashSet::new();
            for (r, w) in d.rows() {
                assert!(*w >= 1.0 && w.fract() == 0.0);
                let ranked: Vec<u32> = r.ranks().iter().flatten().copied().collect();
                assert_eq!(ranked.len(), k);
                let mut sorted = ranked.clone();
                sorted.sort_unstable();
                assert_eq!(sorted, (1..=k as u32).collect::<Vec<_>>());
                assert!(seen.insert(r.ranks().to_vec()));
            }
        }
    }
}

#[test]
fn replication_seeds_are_distinct() {
    let mut seen = std::collections::HashSet::new();
    for cell in 0..3 {
        for rep in 0..10 {
            assert!(seen.insert(replication_seed(9, cell, rep)));
        }
    }
}

fn small_config(m: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(m);
    cfg.replications = 4;
    cfg.n = 60;
    cfg.maxiter = 20;
    cfg.seed = 3;
    cfg
}

#[test]
fn fast_overlap_is_at_least_quick_overlap() {
    let report = run_experiment(&small_config(4)).unwrap();
    assert_eq!(report.replications.len(), 12);
    for rec in &report.replications {
        let overlap = |a: Algorithm| rec.runs.iter().find(|r| r.algorithm == a).unwrap().overlap_with_bb.unwrap();
        assert!(overlap(Algorithm::Fast) >= overlap(Algorithm::Quick));
        assert!(overlap(Algorithm::Quick) >= 1);
        let bb = rec.runs.iter().find(|r| r.algorithm == Algorithm::Bb).unwrap();
        assert_eq!(overlap(Algorithm::Bb), bb.solutions.len());
    }
}

#[test]
fn lower_theta_does_not_shrink_solution_counts() {
    let mut cfg = small_config(4);
    cfg.thetas = vec![0.7, 0.1];
    cfg.replications = 10;
    cfg.n = 200;
    cfg.algorithms = vec![Algorithm::Bb];
    let report = run_experiment(&cfg).unwrap();
    let mean = |t: f64| {
        report
            .summaries
            .iter()
            .find(|s| s.theta == Some(t))
            .unwrap()
            .solution_count
            .mean
    };
    assert!(mean(0.1) >= mean(0.7), "{} < {}", mean(0.1), mean(0.7));
}

#[test]
fn reports_round_trip_and_ignore_thread_count() {
    let mut cfg = small_config(5);
    cfg.record_timings = false;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(ExperimentReport::from_json(&a.to_json()).unwrap(), a);

    let mut timed = small_config(4);
    timed.pick = Some(2);
    let r = run_experiment(&timed).unwrap();
    assert!(r.summaries.iter().all(|s| s.elapsed_ms.is_some() && s.theta.is_none()));
    assert_eq!(ExperimentReport::from_json(&r.to_json()).unwrap(), r);
}
