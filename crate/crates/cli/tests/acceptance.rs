//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use medrank::bb::Branch;
use medrank::heuristic::initial_q;
use medrank::sim::Space;
use medrank::{
    approx_weak_order_count, bb_consensus, bb_solve, borda, branch_penalty, condorcet_consensus, condorcet_support,
    enumerate_weak_orders, fast, kemeny_distance, kendall_tau, model_pmf, parse_dataset, quick, quick_best_of_q,
    sample, tau_x, BbOptions, CombinedInput, ModelSpec, Ranking, RankingDataset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/emond_mason.csv"))
}

fn emond_mason() -> CombinedInput {
    CombinedInput::from_dataset(&parse_dataset(fixture()).unwrap())
}

const OPTIMA: [&str; 3] = [
    "D L (E-M) (A-B) I P (C-N) H F G (O-Q)",
    "D L (E-M) (A-B-P) (C-N) I H F G (O-Q)",
    "D L (E-M) (B-P) A (C-N) I H F G (O-Q)",
];

fn orderings(rs: &[Ranking]) -> Vec<String> {
    let mut v: Vec<String> = rs.iter().map(|r| r.ordering_string()).collect();
    v.sort();
    v
}

fn optima() -> Vec<String> {
    let mut v: Vec<String> = OPTIMA.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

// Reference computations written from the definitions.

fn em(a: u32, b: u32) -> i64 {
    if a <= b {
        1
    } else {
        -1
    }
}

fn objective(d: &RankingDataset, cand: &[u32]) -> i64 {
    let m = cand.len();
    let mut total = 0;
    for (r, w) in d.rows() {
        let rr = r.ranks();
        for i in 0..m {
            for j in 0..m {
                if let (true, Some(a), Some(b)) = (i != j, rr[i], rr[j]) {
                    total += *w as i64 * em(cand[i], cand[j]) * em(a, b);
                }
            }
        }
    }
    total
}

fn ordered_bell(n: usize) -> u64 {
    let mut a = vec![1u64];
    for k in 1..=n {
        let mut s = 0;
        let mut c = 1u64;
        for j in 1..=k {
            c = c * (k - j + 1) as u64 / j as u64;
            s += c * a[k - j];
        }
        a.push(s);
    }
    a[n]
}

fn random_weak(rng: &mut ChaCha8Rng, m: usize) -> Vec<u32> {
    (0..m).map(|_| rng.random_range(1..=m as u32)).collect()
}

fn random_strict(rng: &mut ChaCha8Rng, m: usize) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut v: Vec<u32> = (1..=m as u32).collect();
    v.shuffle(rng);
    v
}

fn complete(v: &[u32]) -> Ranking {
    Ranking::from_ranks(v).unwrap()
}

fn random_dataset(rng: &mut ChaCha8Rng, m: usize, n: usize) -> RankingDataset {
    let rows: Vec<(Vec<u32>, f64)> = (0..n)
        .map(|_| (random_weak(rng, m), rng.random_range(1..=5) as f64))
        .collect();
    let refs: Vec<(&[u32], f64)> = rows.iter().map(|(r, w)| (r.as_slice(), *w)).collect();
    RankingDataset::from_weighted_ranks(&refs).unwrap()
}

fn identity_ranks(m: usize) -> Vec<u32> {
    (1..=m as u32).collect()
}

fn c1_branch_and_bound() -> Check {
    let ci = emond_mason();
    let t = Instant::now();
    let out = bb_consensus(&ci, &BbOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(orderings(&out.solutions) == optima(), || {
        format!("solutions {:?}", orderings(&out.solutions))
    })?;
    ensure((out.avg_tau_x - 0.166).abs() <= 5e-4, || format!("avg tau_x {}", out.avg_tau_x))?;
    ensure(elapsed < Duration::from_secs(600), || format!("took {}", secs(elapsed)))?;
    Ok(format!(
        "3/3 orderings, avg tau_x {:.5}, {} nodes, {}",
        out.avg_tau_x,
        out.nodes.unwrap_or(0),
        secs(elapsed)
    ))
}

fn c2_fast_completeness() -> Check {
    let ci = emond_mason();
    let t = Instant::now();
    let out = fast(&ci, 100, 1).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure(orderings(&out.solutions) == optima(), || {
        format!("solutions {:?}", orderings(&out.solutions))
    })?;
    ensure((out.avg_tau_x - 0.166).abs() <= 5e-4, || format!("avg tau_x {}", out.avg_tau_x))?;
    ensure(elapsed <= Duration::from_secs(60), || format!("took {}", secs(elapsed)))?;
    Ok(format!("maxiter=100 seed=1: 3/3 orderings, {}", secs(elapsed)))
}

fn c3_quick() -> Check {
    let ci = emond_mason();
    let t = Instant::now();
    let out = quick_best_of_q(&ci).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure((out.avg_tau_x - 0.166).abs() <= 5e-4, || format!("avg tau_x {}", out.avg_tau_x))?;
    ensure(elapsed <= Duration::from_secs(1), || format!("took {}", secs(elapsed)))?;
    let ordering = out.candidate.canonicalize().ordering_string();
    ensure(OPTIMA.contains(&ordering.as_str()), || format!("{ordering} is not optimal"))?;
    Ok(format!("{ordering}, avg tau_x {:.5}, {}", out.avg_tau_x, secs(elapsed)))
}

fn worked_example() -> RankingDataset {
    RankingDataset::from_weighted_ranks(&[(&[2, 1, 3], 12.0), (&[1, 2, 3], 5.0), (&[3, 2, 1], 7.0)]).unwrap()
}

fn c4_borda() -> Check {
    let (totals, consensus) = borda(&worked_example()).map_err(|e| e.to_string())?;
    ensure(totals == [50.0, 36.0, 58.0], || format!("totals {totals:?}"))?;
    ensure(consensus.ordering_string() == "B A C", || consensus.ordering_string())?;
    Ok("totals 50/36/58, consensus B A C".into())
}

fn c5_condorcet() -> Check {
    let s = condorcet_support(&worked_example());
    let expected = vec![vec![0.0, 5.0, 17.0], vec![19.0, 0.0, 17.0], vec![7.0, 7.0, 0.0]];
    ensure(s.to_rows() == expected, || format!("support {:?}", s.to_rows()))?;
    let c = condorcet_consensus(&s).map_err(|e| e.to_string())?;
    ensure(c.ordering_string() == "B A C", || c.ordering_string())?;
    Ok("support matrix matches, consensus B A C".into())
}

fn c6_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sizes: Vec<usize> = (3..=5).map(|m| enumerate_weak_orders(m).unwrap().len()).collect();
    ensure(sizes == [13, 75, 541], || format!("space sizes {sizes:?}"))?;
    let mut agree = 0;
    for i in 0..100 {
        let m = 3 + i % 3;
        let d = random_dataset(&mut rng, m, 20);
        let ci = CombinedInput::from_dataset(&d);
        let mut best = i64::MIN;
        let mut arg: Vec<Vec<u32>> = Vec::new();
        for cand in enumerate_weak_orders(m).unwrap() {
            let ranks = cand.complete_ranks().unwrap();
            let v = objective(&d, &ranks);
            if v > best {
                best = v;
                arg = vec![ranks];
            } else if v == best {
                arg.push(ranks);
            }
        }
        arg.sort();
        let out = bb_solve(&ci, &initial_q(&ci), &BbOptions::default()).map_err(|e| e.to_string())?;
        let got: Vec<Vec<u32>> = out.solutions.iter().map(|r| r.complete_ranks().unwrap()).collect();
        if got == arg && out.objective_dot == best as f64 {
            agree += 1;
        }
    }
    ensure(agree == 100, || format!("{agree}/100 instances agree"))?;
    Ok("100/100 solution sets equal the brute-force argmax".into())
}

fn c7_heuristic_quality() -> Check {
    let thetas = [0.1, 0.4, 0.7];
    let (mut fast_hits, mut quick_hits) = (0, 0);
    let total = 50;
    for i in 0..total {
        let m = 3 + i % 4;
        let space = if i % 2 == 0 { Space::Weak } else { Space::Full };
        let spec = ModelSpec::new(complete(&identity_ranks(m)), thetas[i % 3], space).unwrap();
        let d = sample(&spec, 50, 500 + i as u64).unwrap();
        let ci = CombinedInput::from_dataset(&d);
        let exact = bb_consensus(&ci, &BbOptions::default()).map_err(|e| e.to_string())?;
        if fast(&ci, 50, i as u64).unwrap().objective_dot == exact.objective_dot {
            fast_hits += 1;
        }
        if quick(&ci, &initial_q(&ci)).unwrap().objective_dot == exact.objective_dot {
            quick_hits += 1;
        }
    }
    let fast_rate = fast_hits as f64 / total as f64;
    let quick_rate = quick_hits as f64 / total as f64;
    ensure(fast_rate >= 0.95, || format!("fast {fast_hits}/{total}"))?;
    ensure(quick_rate >= 0.70, || format!("quick {quick_hits}/{total}"))?;
    Ok(format!("fast {fast_hits}/{total} optimal, quick {quick_hits}/{total} optimal"))
}

fn c8_metric_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let m = rng.random_range(1..=5);
        let (a, b, c) = (
            complete(&random_weak(&mut rng, m)),
            complete(&random_weak(&mut rng, m)),
            complete(&random_weak(&mut rng, m)),
        );
        let ab = kemeny_distance(&a, &b).unwrap();
        let ba = kemeny_distance(&b, &a).unwrap();
        let ac = kemeny_distance(&a, &c).unwrap();
        let cb = kemeny_distance(&c, &b).unwrap();
        ensure(ab >= 0.0 && (ab == 0.0) == (a.canonicalize() == b.canonicalize()), || {
            format!("positivity fails for {a} / {b}")
        })?;
        ensure(ab == ba, || format!("symmetry fails for {a} / {b}"))?;
        ensure(ab <= ac + cb, || format!("triangle fails for {a} / {b} / {c}"))?;
    }
    let all = enumerate_weak_orders(4).unwrap();
    let mut min = f64::INFINITY;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            min = min.min(kemeny_distance(a, b).unwrap());
        }
    }
    ensure(min == 1.0, || format!("minimum positive distance {min}"))?;
    Ok(format!("1000 triples pass, minimum distance over {} points is 1", all.len()))
}

fn c9_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let m = rng.random_range(2..=7);
        let (a, b) = (complete(&random_weak(&mut rng, m)), complete(&random_weak(&mut rng, m)));
        let d = kemeny_distance(&a, &b).unwrap();
        let mm = (m * (m - 1)) as f64;
        let t = tau_x(&a, &b).unwrap();
        ensure((t - (1.0 - 2.0 * d / mm)).abs() < 1e-12, || format!("tau_x identity fails for {a} / {b}"))?;
    }
    for _ in 0..1000 {
        let m = rng.random_range(2..=7);
        let (a, b) = (complete(&random_strict(&mut rng, m)), complete(&random_strict(&mut rng, m)));
        let (t, k) = (tau_x(&a, &b).unwrap(), kendall_tau(&a, &b).unwrap());
        ensure((t - k).abs() < 1e-12, || format!("tau_x {t} != kendall {k} for {a} / {b}"))?;
    }
    for _ in 0..200 {
        let m = rng.random_range(2..=7);
        let n = rng.random_range(1..=15);
        let data = random_dataset(&mut rng, m, n);
        let ci = CombinedInput::from_dataset(&data);
        let s = complete(&random_weak(&mut rng, m));
        let lhs: f64 = data.rows().iter().map(|(r, w)| w * kemeny_distance(&s, r).unwrap()).sum();
        let dot = ci.ranking_dot(&s).unwrap();
        let rhs = (data.total_weight() * (m * (m - 1)) as f64 - dot) / 2.0;
        ensure(lhs == rhs, || format!("weighted distance {lhs} != {rhs}"))?;
    }
    for _ in 0..200 {
        let m = rng.random_range(2..=7);
        let n = rng.random_range(1..=15);
        let ci = CombinedInput::from_dataset(&random_dataset(&mut rng, m, n));
        let cand = random_weak(&mut rng, m);
        let mut sum = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                let b = match cand[i].cmp(&cand[j]) {
                    std::cmp::Ordering::Less => Branch::Ahead,
                    std::cmp::Ordering::Equal => Branch::Tied,
                    std::cmp::Ordering::Greater => Branch::Behind,
                };
                sum += branch_penalty(ci.get(i, j), ci.get(j, i), b);
            }
        }
        let half = ci.ranking_penalty(&complete(&cand)).unwrap() / 2.0;
        ensure(sum == half, || format!("pair penalties {sum} != {half}"))?;
    }
    Ok("all four identities hold exactly".into())
}

fn c10_enumeration() -> Check {
    let expected = [3u64, 13, 75, 541, 4683];
    for (m, &e) in (2..=6).zip(&expected) {
        let got = enumerate_weak_orders(m).unwrap().len() as u64;
        ensure(got == e && ordered_bell(m) == e, || format!("m={m}: {got} vs {e}"))?;
    }
    for m in 3..=6 {
        let exact = ordered_bell(m) as f64;
        let rel = (approx_weak_order_count(m) - exact).abs() / exact;
        ensure(rel < 0.01, || format!("m={m}: relative error {rel}"))?;
    }
    Ok("sizes 3/13/75/541/4683, approximation within 1%".into())
}

fn medrank(args: &[&str], threads: usize) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_medrank"))
        .args(args)
        .args(["--threads", &threads.to_string()])
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn c11_sampler() -> Check {
    let mut worst: f64 = 0.0;
    for space in [Space::Full, Space::Weak] {
        for m in 1..=6 {
            for theta in [0.0, 0.1, 0.4, 0.7, 2.0] {
                let spec = ModelSpec::new(complete(&identity_ranks(m)), theta, space).unwrap();
                let total: f64 = model_pmf(&spec).unwrap().probabilities.iter().sum();
                worst = worst.max((total - 1.0).abs());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("pmf total off by {worst}"))?;

    let spec = ModelSpec::new(complete(&[1, 2, 3]), 0.0, Space::Full).unwrap();
    let d = sample(&spec, 10_000, 11).unwrap();
    let pmf = model_pmf(&spec).unwrap();
    let stat: f64 = pmf
        .points
        .iter()
        .zip(&pmf.probabilities)
        .map(|(p, pr)| {
            let o = d.rows().iter().filter(|(r, _)| r.complete_ranks().unwrap() == *p).count() as f64;
            let e = pr * 10_000.0;
            (o - e) * (o - e) / e
        })
        .sum();
    let p_value = 1.0 - ChiSquared::new(5.0).unwrap().cdf(stat);
    ensure(p_value > 0.01, || format!("chi-square p = {p_value}"))?;

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.toml");
    std::fs::write(&cfg, "m = 4\nthetas = [0.7, 0.1]\nreplications = 3\nn = 80\nmaxiter = 20\nseed = 5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let em = fixture();
    let em = em.to_str().unwrap();
    let runs: [&[&str]; 4] = [
        &["simulate", "--m", "5", "--theta", "0.4", "--n", "300", "--seed", "7", "--space", "weak"],
        &["simulate", "--m", "9", "--pick", "5", "--seed", "7"],
        &["bench", "--config", cfg, "--no-timings"],
        &["consensus", "--input", em, "--algorithm", "fast", "--maxiter", "40", "--seed", "3", "--no-timings"],
    ];
    for args in runs {
        let base = medrank(args, 1);
        for threads in [2, 4, 8] {
            ensure(medrank(args, threads) == base, || format!("{args:?} differs with {threads} threads"))?;
        }
    }
    Ok(format!("pmf error {worst:.1e}, chi-square p = {p_value:.3}, outputs identical for 1/2/4/8 threads"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Emond–Mason regression (branch-and-bound)", c1_branch_and_bound),
        ("FAST completeness on the Emond–Mason data", c2_fast_completeness),
        ("QUICK on the Emond–Mason data", c3_quick),
        ("Borda worked example", c4_borda),
        ("Condorcet worked example", c5_condorcet),
        ("Exact solver vs brute force", c6_oracle),
        ("Heuristic quality", c7_heuristic_quality),
        ("Metric axioms", c8_metric_axioms),
        ("Identity suite", c9_identities),
        ("Enumeration counts", c10_enumeration),
        ("Sampler and determinism", c11_sampler),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS [{:>2}] {name}: {detail}", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {why}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: panicked", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

