//! Synthetic ranking data and the algorithm comparison runner.
//!
//! Complete rankings are drawn from the distance-based model
//! `p(a) ∝ exp(-θ d(S, a))` by exact enumeration of the ranking space.
//! Incomplete data follow a "pick k of m" scheme with normally distributed
//! weights rescaled to a total of 200.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bb::{bb_consensus, BbOptions};
use crate::combined::CombinedInput;
use crate::dataset::RankingDataset;
use crate::error::{Error, Result};
use crate::heuristic::{fast, quick_consensus};
use crate::io::dataset_digest;
use crate::metrics::kemeny_raw;
use crate::ranking::{Labels, Ranking};
use crate::solution::{Algorithm, SolutionSet};
use crate::weak_orders::{permutation_ranks, weak_order_ranks, MAX_ENUMERABLE};

pub const INCOMPLETE_TOTAL_WEIGHT: f64 = 200.0;
pub const INCOMPLETE_MIN_ROWS: usize = 15;
pub const INCOMPLETE_MAX_ROWS: usize = 30;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    /// Tie-free permutations.
    #[default]
    Full,
    /// All weak orders.
    Weak,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Full => "full",
            Space::Weak => "weak",
        })
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Space::Full),
            "weak" => Ok(Space::Weak),
            other => Err(Error::Config(format!("unknown ranking space `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    consensus: Ranking,
    theta: f64,
    space: Space,
}

impl ModelSpec {
    pub fn new(consensus: Ranking, theta: f64, space: Space) -> Result<Self> {
        if !(theta.is_finite() && theta >= 0.0) {
            return Err(Error::Config(format!("theta must be a finite non-negative number, got {theta}")));
        }
        if !consensus.is_complete() {
            return Err(Error::MissingRank);
        }
        if space == Space::Full && consensus.has_ties() {
            return Err(Error::Config("a consensus in the full space cannot contain ties".into()));
        }
        if consensus.len() > MAX_ENUMERABLE {
            return Err(Error::SizeCap {
                what: "objects for exact sampling",
                value: consensus.len(),
                limit: MAX_ENUMERABLE,
            });
        }
        Ok(ModelSpec {
            consensus: consensus.canonicalize(),
            theta,
            space,
        })
    }

    pub fn consensus(&self) -> &Ranking {
        &self.consensus
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn space(&self) -> Space {
        self.space
    }
}

/// Probability table over an enumerated ranking space.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPmf {
    pub labels: Labels,
    pub points: Vec<Vec<u32>>,
    pub distances: Vec<u64>,
    pub probabilities: Vec<f64>,
}

impl ModelPmf {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn probability_of(&self, r: &Ranking) -> Option<f64> {
        let c = r.canonicalize();
        let ranks = c.complete_ranks().ok()?;
        self.points
            .iter()
            .position(|p| *p == ranks)
            .map(|i| self.probabilities[i])
    }
}

pub fn model_pmf(spec: &ModelSpec) -> Result<ModelPmf> {
    let m = spec.consensus.len();
    let points = match spec.space {
        Space::Full => permutation_ranks(m)?,
        Space::Weak => weak_order_ranks(m)?,
    };
    let s = spec.consensus.ranks();
    let distances: Vec<u64> = points
        .iter()
        .map(|p| {
            let a: Vec<Option<u32>> = p.iter().map(|&v| Some(v)).collect();
            kemeny_raw(s, &a)
        })
        .collect();
    let raw: Vec<f64> = distances
        .iter()
        .map(|&d| (-spec.theta * d as f64).exp())
        .collect();
    let z: f64 = raw.iter().sum();
    Ok(ModelPmf {
        labels: spec.consensus.labels().clone(),
        points,
        distances,
        probabilities: raw.iter().map(|p| p / z).collect(),
    })
}

/// `n` unit-weight draws from the model, by inverse CDF.
pub fn sample(spec: &ModelSpec, n: usize, seed: u64) -> Result<RankingDataset> {
    if n == 0 {
        return Err(Error::Config("sample size must be at least 1".into()));
    }
    let pmf = model_pmf(spec)?;
    let mut cdf = Vec::with_capacity(pmf.len());
    let mut acc = 0.0;
    for p in &pmf.probabilities {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            let i = cdf.partition_point(|&c| c <= u).min(pmf.len() - 1);
            (Ranking::from_dense_unchecked(pmf.labels.clone(), &pmf.points[i]), 1.0)
        })
        .collect();
    RankingDataset::new(pmf.labels.clone(), rows)
}

fn falling_factorial(m: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((m - i) as u128))
}

/// Splits `total` into positive integers proportional to `raw`, by largest
/// remainder.
fn apportion(raw: &[f64], total: f64) -> Vec<f64> {
    let sum: f64 = raw.iter().sum();
    let quotas: Vec<f64> = raw.iter().map(|w| w / sum * total).collect();
    let mut out: Vec<f64> = quotas.iter().map(|q| q.floor().max(1.0)).collect();
    let assigned: f64 = out.iter().sum();
    let mut left = (total - assigned).max(0.0) as usize;
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        out[i] += 1.0;
        left -= 1;
    }
    out
}

/// Distinct uniformly drawn "pick k of m" rankings (15 to 30 of them, fewer
/// when the space is smaller) with integer weights summing to 200.
pub fn sample_incomplete(m: usize, k: usize, seed: u64) -> Result<RankingDataset> {
    if k < 2 || k > m {
        return Err(Error::Config(format!("pick-k needs 2 <= k <= m, got k={k}, m={m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = falling_factorial(m, k);
    let wanted = rng.random_range(INCOMPLETE_MIN_ROWS..=INCOMPLETE_MAX_ROWS);
    let count = (wanted as u128).min(space) as usize;

    let mut seen = HashSet::new();
    let mut picks: Vec<Vec<Option<u32>>> = Vec::with_capacity(count);
    let mut idx: Vec<usize> = (0..m).collect();
    while picks.len() < count {
        let (chosen, _) = idx.partial_shuffle(&mut rng, k);
        let mut ranks = vec![None; m];
        for (pos, &o) in chosen.iter().enumerate() {
            ranks[o] = Some(pos as u32 + 1);
        }
        if seen.insert(ranks.clone()) {
            picks.push(ranks);
        }
    }

    let mean = rng.random_range(10.0..=30.0);
    let sd = rng.random_range(2.5..=9.0);
    let normal = Normal::new(mean, sd).map_err(|e| Error::Config(e.to_string()))?;
    let raw: Vec<f64> = (0..count)
        .map(|_| loop {
            let w: f64 = normal.sample(&mut rng);
            if w > 0.0 {
                break w;
            }
        })
        .collect();
    let weights = apportion(&raw, INCOMPLETE_TOTAL_WEIGHT);

    let labels = Labels::default_for(m);
    let rows = picks
        .into_iter()
        .zip(weights)
        .map(|(r, w)| Ok((Ranking::new(labels.clone(), r)?, w)))
        .collect::<Result<Vec<_>>>()?;
    RankingDataset::new(labels, rows)
}

fn default_thetas() -> Vec<f64> {
    vec![0.7, 0.4, 0.1]
}
fn default_n() -> usize {
    200
}
fn default_replications() -> usize {
    10
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Bb, Algorithm::Quick, Algorithm::Fast]
}
fn default_maxiter() -> usize {
    50
}
fn default_true() -> bool {
    true
}

/// One experiment: a grid of `thetas` (or a single pick-k cell) times
/// `replications` datasets, each solved by every listed algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    #[serde(default)]
    pub space: Space,
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_maxiter")]
    pub maxiter: usize,
    #[serde(default)]
    pub seed: u64,
    /// Model consensus as a rank sequence; defaults to `1, 2, ..., m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consensus: Option<Vec<u32>>,
    /// When set, datasets come from the pick-k-of-m scheme and `thetas`,
    /// `n`, `space` and `consensus` are ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pick: Option<usize>,
    #[serde(default = "default_true")]
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn new(m: usize) -> Self {
        ExperimentConfig {
            m,
            space: Space::Full,
            thetas: default_thetas(),
            n: default_n(),
            replications: default_replications(),
            algorithms: default_algorithms(),
            maxiter: default_maxiter(),
            seed: 0,
            consensus: None,
            pick: None,
            record_timings: true,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.m < 2 {
            return bad(format!("m must be at least 2, got {}", self.m));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.algorithms.is_empty() {
            return bad("at least one algorithm is required".into());
        }
        if let Some(a) = self
            .algorithms
            .iter()
            .find(|a| !matches!(a, Algorithm::Bb | Algorithm::Quick | Algorithm::Fast))
        {
            return bad(format!("algorithm `{a}` is not supported in experiments"));
        }
        if self.maxiter == 0 {
            return bad("maxiter must be at least 1".into());
        }
        match self.pick {
            Some(k) if k < 2 || k > self.m => bad(format!("pick must satisfy 2 <= k <= m, got {k}")),
            Some(_) => Ok(()),
            None => {
                if self.thetas.is_empty() {
                    return bad("at least one theta is required".into());
                }
                if self.n == 0 {
                    return bad("n must be at least 1".into());
                }
                self.model_spec(self.thetas[0]).map(|_| ())
            }
        }
    }

    fn model_spec(&self, theta: f64) -> Result<ModelSpec> {
        let consensus = match &self.consensus {
            Some(r) => Ranking::from_ranks(r)?,
            None => Ranking::from_ranks(&(1..=self.m as u32).collect::<Vec<_>>())?,
        };
        if consensus.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: consensus.len(),
            });
        }
        ModelSpec::new(consensus, theta, self.space)
    }

    fn cells(&self) -> Vec<Option<f64>> {
        match self.pick {
            Some(_) => vec![None],
            None => self.thetas.iter().copied().map(Some).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub solutions: Vec<Vec<u32>>,
    pub objective_dot: f64,
    pub avg_tau_x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    /// Solutions shared with the branch-and-bound set, when it was run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap_with_bb: Option<usize>,
    /// Whether the objective matches the branch-and-bound optimum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub replication: usize,
    pub seed: u64,
    pub input_digest: String,
    pub runs: Vec<AlgorithmRun>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Some(Summary {
            mean: v.iter().sum::<f64>() / n as f64,
            median,
            min: v[0],
            max: v[n - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub algorithm: Algorithm,
    pub solution_count: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap_with_bb: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<Summary>,
}

pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: ExperimentConfig,
    pub replications: Vec<ReplicationRecord>,
    pub summaries: Vec<CellSummary>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// Seed of replication `rep` in grid cell `cell`, from its own stream of the
/// master generator.
pub fn replication_seed(master: u64, cell: usize, rep: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((cell as u64) << 32) | rep as u64);
    rng.next_u64()
}

fn solve(ci: &CombinedInput, algorithm: Algorithm, maxiter: usize, seed: u64) -> Result<SolutionSet> {
    match algorithm {
        Algorithm::Bb => bb_consensus(ci, &BbOptions::default()),
        Algorithm::Quick => quick_consensus(ci),
        Algorithm::Fast => fast(ci, maxiter, seed),
        other => Err(Error::Config(format!("algorithm `{other}` is not supported in experiments"))),
    }
}

fn run_replication(cfg: &ExperimentConfig, theta: Option<f64>, cell: usize, rep: usize) -> Result<ReplicationRecord> {
    let seed = replication_seed(cfg.seed, cell, rep);
    let data = match (cfg.pick, theta) {
        (Some(k), _) => sample_incomplete(cfg.m, k, seed)?,
        (None, Some(t)) => sample(&cfg.model_spec(t)?, cfg.n, seed)?,
        (None, None) => unreachable!("model cells always carry a theta"),
    };
    let ci = CombinedInput::from_dataset(&data);
    let sets: Vec<SolutionSet> = cfg
        .algorithms
        .iter()
        .map(|&a| solve(&ci, a, cfg.maxiter, seed))
        .collect::<Result<_>>()?;
    let bb = sets.iter().find(|s| s.algorithm == Algorithm::Bb);
    let runs = sets
        .iter()
        .map(|s| AlgorithmRun {
            algorithm: s.algorithm,
            solutions: s
                .solutions
                .iter()
                .map(|r| r.complete_ranks().expect("solutions are complete"))
                .collect(),
            objective_dot: s.objective_dot,
            avg_tau_x: s.avg_tau_x,
            elapsed_ms: cfg.record_timings.then(|| s.elapsed_ms()),
            overlap_with_bb: bb.map(|b| s.overlap(b)),
            optimal: bb.map(|b| same_objective(&ci, s.objective_dot, b.objective_dot)),
        })
        .collect();
    Ok(ReplicationRecord {
        theta,
        replication: rep,
        seed,
        input_digest: dataset_digest(&data),
        runs,
    })
}

fn same_objective(ci: &CombinedInput, a: f64, b: f64) -> bool {
    use crate::scalar::Scalar;
    if ci.is_exact() {
        a == b
    } else {
        a.same(b)
    }
}

fn summarize(cfg: &ExperimentConfig, records: &[ReplicationRecord]) -> Vec<CellSummary> {
    let mut out = Vec::new();
    for theta in cfg.cells() {
        for &alg in &cfg.algorithms {
            let runs: Vec<&AlgorithmRun> = records
                .iter()
                .filter(|r| r.theta == theta)
                .flat_map(|r| r.runs.iter().filter(|x| x.algorithm == alg))
                .collect();
            let counts: Vec<f64> = runs.iter().map(|r| r.solutions.len() as f64).collect();
            let overlap: Vec<f64> = runs.iter().filter_map(|r| r.overlap_with_bb).map(|v| v as f64).collect();
            let optimal: Vec<bool> = runs.iter().filter_map(|r| r.optimal).collect();
            let times: Vec<f64> = runs.iter().filter_map(|r| r.elapsed_ms).collect();
            out.push(CellSummary {
                theta,
                algorithm: alg,
                solution_count: Summary::of(&counts).expect("every cell has replications"),
                overlap_with_bb: Summary::of(&overlap),
                optimal_fraction: (!optimal.is_empty())
                    .then(|| optimal.iter().filter(|&&o| o).count() as f64 / optimal.len() as f64),
                elapsed_ms: Summary::of(&times),
            });
        }
    }
    out
}

/// Runs every replication (concurrently, each on its own seed stream) and
/// assembles the report in grid order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let jobs: Vec<(Option<f64>, usize, usize)> = cfg
        .cells()
        .into_iter()
        .enumerate()
        .flat_map(|(c, theta)| (0..cfg.replications).map(move |r| (theta, c, r)))
        .collect();
    let replications = jobs
        .par_iter()
        .map(|&(theta, c, r)| run_replication(cfg, theta, c, r))
        .collect::<Result<Vec<_>>>()?;
    let summaries = summarize(cfg, &replications);
    Ok(ExperimentReport {
        schema_version: EXPERIMENT_SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        replications,
        summaries,
    })
}
