//! Borda count and Condorcet pairwise-majority baselines.

use std::time::Instant;

use crate::combined::CombinedInput;
use crate::dataset::RankingDataset;
use crate::error::{Error, Result};
use crate::ranking::{Labels, Ranking};
use crate::scalar::{Scalar, SquareMatrix};
use crate::solution::{Algorithm, SolutionSet};

/// Total weighted rank per object and the induced consensus (lowest total
/// first, equal totals tied). Ranks are read in dense form.
pub fn borda(d: &RankingDataset) -> Result<(Vec<f64>, Ranking)> {
    if !d.is_complete() {
        return Err(Error::MissingRank);
    }
    let m = d.num_objects();
    let mut totals = vec![0.0; m];
    for (r, w) in d.rows() {
        for (t, rank) in totals.iter_mut().zip(r.ranks()) {
            *t += w * rank.unwrap() as f64;
        }
    }
    let consensus = ascending_with_ties(d.labels().clone(), &totals);
    Ok((totals, consensus))
}

fn ascending_with_ties(labels: Labels, values: &[f64]) -> Ranking {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    for i in idx {
        match buckets.last_mut() {
            Some(b) if values[b[0]].same(values[i]) => b.push(i),
            _ => buckets.push(vec![i]),
        }
    }
    Ranking::from_buckets(labels, &buckets).expect("every object is placed once")
}

/// Pairwise support: entry `(i, j)` is the total weight of judges strictly
/// preferring `i` to `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportMatrix {
    labels: Labels,
    support: SquareMatrix<f64>,
}

impl SupportMatrix {
    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.support.get(i, j)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.support.to_rows()
    }
}

pub fn condorcet_support(d: &RankingDataset) -> SupportMatrix {
    let m = d.num_objects();
    let mut support = SquareMatrix::filled(m, 0.0);
    for (r, w) in d.rows() {
        let ranks = r.ranks();
        for i in 0..m {
            for j in 0..m {
                if let (Some(a), Some(b)) = (ranks[i], ranks[j]) {
                    if a < b {
                        support.set(i, j, support.get(i, j) + w);
                    }
                }
            }
        }
    }
    SupportMatrix {
        labels: d.labels().clone(),
        support,
    }
}

/// Ranking induced by the strict-majority relation.
///
/// Objects are layered topologically (all undominated objects of the
/// remaining set form the next tie group). Fails with [`Error::Cycle`] when
/// majorities are cyclic, and with [`Error::IntransitiveTies`] when equal
/// support between two objects cannot be represented as a tie.
pub fn condorcet_consensus(s: &SupportMatrix) -> Result<Ranking> {
    let m = s.labels.len();
    let beats = |i: usize, j: usize| s.get(i, j).above(s.get(j, i));
    let mut remaining: Vec<usize> = (0..m).collect();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while !remaining.is_empty() {
        let sources: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&j| !remaining.iter().any(|&i| beats(i, j)))
            .collect();
        if sources.is_empty() {
            return Err(Error::Cycle(find_cycle(&remaining, &beats, &s.labels)));
        }
        remaining.retain(|o| !sources.contains(o));
        layers.push(sources);
    }
    for (k, upper) in layers.iter().enumerate() {
        for lower in &layers[k + 1..] {
            for &i in upper {
                for &j in lower {
                    if !beats(i, j) {
                        return Err(Error::IntransitiveTies(format!(
                            "`{}` and `{}` have equal support but cannot be tied",
                            s.labels.get(i),
                            s.labels.get(j)
                        )));
                    }
                }
            }
        }
    }
    Ranking::from_buckets(s.labels.clone(), &layers)
}

fn find_cycle(remaining: &[usize], beats: &impl Fn(usize, usize) -> bool, labels: &Labels) -> Vec<String> {
    // every remaining object has a remaining predecessor; walk until a repeat
    let mut path = vec![remaining[0]];
    loop {
        let cur = *path.last().unwrap();
        let pred = *remaining.iter().find(|&&i| beats(i, cur)).unwrap();
        if let Some(pos) = path.iter().position(|&p| p == pred) {
            let mut cycle: Vec<usize> = path[pos..].to_vec();
            cycle.reverse();
            return cycle.iter().map(|&i| labels.get(i).to_string()).collect();
        }
        path.push(pred);
    }
}

fn single(d: &RankingDataset, algorithm: Algorithm, run: impl FnOnce() -> Result<Ranking>) -> Result<SolutionSet> {
    let start = Instant::now();
    let consensus = run()?;
    let elapsed = start.elapsed();
    let ci = CombinedInput::from_dataset(d);
    let objective_dot = ci.ranking_dot(&consensus)?;
    Ok(SolutionSet {
        solutions: vec![consensus.canonicalize()],
        objective_dot,
        avg_tau_x: ci.avg_tau_x(objective_dot),
        algorithm,
        elapsed,
        iterations: None,
        seed: None,
        nodes: None,
    })
}

/// Borda consensus scored against the dataset's CI.
pub fn borda_solution(d: &RankingDataset) -> Result<SolutionSet> {
    single(d, Algorithm::Borda, || borda(d).map(|(_, r)| r))
}

/// Condorcet consensus scored against the dataset's CI.
pub fn condorcet_solution(d: &RankingDataset) -> Result<SolutionSet> {
    single(d, Algorithm::Condorcet, || condorcet_consensus(&condorcet_support(d)))
}
