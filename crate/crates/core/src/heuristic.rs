//! QUICK insertion heuristic and the FAST multi-start wrapper.
//!
//! QUICK walks the objects of a start ranking in order. The first object is
//! fixed; every following object is tried in each of the `2s + 1` positions
//! relative to the `s` distinct levels fixed so far (ahead of, or tied with,
//! each level, or behind the last one) while every other object keeps its
//! current place. The position with the lowest full penalty `V - dot` is
//! kept, the first one met when scanning from the back on equal penalties,
//! and the object becomes fixed. Passes repeat from the result until it
//! stops changing.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bb::PairCosts;
use crate::combined::{abs_sum, dot_of_ranks, CiValues, CombinedInput};
use crate::error::{Error, Result};
use crate::ranking::{dense, Labels, Ranking};
use crate::scalar::{Scalar, SquareMatrix};
use crate::solution::{canonical_sorted, Algorithm, SolutionSet};

/// Upper limit on QUICK passes; at least [`MIN_PASSES`] always run.
pub const MAX_PASSES: usize = 25;
pub const MIN_PASSES: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicResult {
    pub candidate: Ranking,
    /// `V - dot` of the candidate.
    pub penalty: f64,
    pub objective_dot: f64,
    pub avg_tau_x: f64,
    pub passes: usize,
    pub start: Ranking,
}

fn q_counts<T: Scalar>(c: &SquareMatrix<T>) -> Vec<u32> {
    let m = c.dim();
    let sign = |v: T| {
        if v.above(T::ZERO) {
            1
        } else if v.below(T::ZERO) {
            -1
        } else {
            0
        }
    };
    let mut q = vec![1u32; m];
    for i in 0..m {
        for j in (i + 1)..m {
            match (sign(c.get(i, j)), sign(c.get(j, i))) {
                (1, -1) => q[i] += 1,
                (-1, 1) => q[j] += 1,
                (1, 1) => {
                    q[i] += 1;
                    q[j] += 1;
                }
                _ => {}
            }
        }
    }
    q
}

/// Preference counts from the CI signs, starting from all ones.
pub fn initial_q_counts(ci: &CombinedInput) -> Vec<u32> {
    match ci.values() {
        CiValues::Integer(c) => q_counts(c),
        CiValues::Real(c) => q_counts(c),
    }
}

/// Q vector as a ranking: more wins ranks higher, equal counts tie.
pub fn initial_q(ci: &CombinedInput) -> Ranking {
    let counts = initial_q_counts(ci);
    let max = counts.iter().copied().max().unwrap_or(0);
    let ranks: Vec<u32> = dense(&counts.iter().map(|&q| max + 1 - q).collect::<Vec<_>>());
    Ranking::from_dense_unchecked(ci.labels().clone(), &ranks)
}

fn respace(levels: &mut [i64]) {
    let mut distinct: Vec<i64> = levels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for l in levels.iter_mut() {
        *l = 2 * (distinct.binary_search(l).unwrap() as i64 + 1);
    }
}

/// Levels tried for an object among the distinct `fixed` levels, from the
/// back: behind the last level, tied with it, just ahead of it, and so on up
/// to just ahead of the first.
fn slots(fixed: &[i64]) -> impl Iterator<Item = i64> + '_ {
    std::iter::once(fixed[fixed.len() - 1] + 1).chain(fixed.iter().rev().flat_map(|&l| [l, l - 1]))
}

fn quick_pass<T: Scalar>(costs: &PairCosts<T>, start: &[u32]) -> Vec<u32> {
    let m = start.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (start[i], i));
    // levels are spaced by two so the slot just ahead of a level is `level - 1`
    let mut levels: Vec<i64> = start.iter().map(|&r| r as i64).collect();
    respace(&mut levels);
    for k in 1..m {
        let x = order[k];
        let mut fixed: Vec<i64> = order[..k].iter().map(|&o| levels[o]).collect();
        fixed.sort_unstable();
        fixed.dedup();
        let mut best: Option<(i64, T)> = None;
        for v in slots(&fixed) {
            let cost = costs.cost_at_level(x, v, &levels);
            if best.is_none_or(|(_, b)| cost.below(b)) {
                best = Some((v, cost));
            }
        }
        let (v, cost) = best.unwrap();
        let current = costs.cost_at_level(x, levels[x], &levels);
        if !cost.above(current) {
            levels[x] = v;
            respace(&mut levels);
        }
    }
    dense(&levels.iter().map(|&l| l as u32).collect::<Vec<_>>())
}

fn quick_ranks<T: Scalar>(costs: &PairCosts<T>, start: &[u32]) -> (Vec<u32>, usize) {
    let mut current = dense(start);
    let mut passes = 0;
    while passes < MAX_PASSES {
        let next = quick_pass(costs, &current);
        passes += 1;
        let fixed_point = next == current;
        current = next;
        if fixed_point && passes >= MIN_PASSES {
            break;
        }
    }
    (current, passes)
}

fn result_from(ci: &CombinedInput, ranks: &[u32], passes: usize, start: Ranking) -> HeuristicResult {
    let candidate = Ranking::from_dense_unchecked(ci.labels().clone(), ranks);
    let dot = ci.ranking_dot(&candidate).expect("candidate is complete");
    HeuristicResult {
        penalty: ci.abs_sum() - dot,
        objective_dot: dot,
        avg_tau_x: ci.avg_tau_x(dot),
        candidate,
        passes,
        start,
    }
}

/// One QUICK run from `start`.
pub fn quick(ci: &CombinedInput, start: &Ranking) -> Result<HeuristicResult> {
    let aligned = ci.align(start)?;
    let start_ranks = aligned.complete_ranks()?;
    let (ranks, passes) = match ci.values() {
        CiValues::Integer(c) => quick_ranks(&PairCosts::new(c), &start_ranks),
        CiValues::Real(c) => quick_ranks(&PairCosts::new(c), &start_ranks),
    };
    Ok(result_from(ci, &ranks, passes, aligned))
}

/// QUICK from the Q vector and from its reverse; the better result wins,
/// the Q run on equal penalty.
pub fn quick_best_of_q(ci: &CombinedInput) -> Result<HeuristicResult> {
    let q = initial_q(ci);
    let forward = quick(ci, &q)?;
    let backward = quick(ci, &q.reverse()?)?;
    Ok(if better(ci, backward.objective_dot, forward.objective_dot) {
        backward
    } else {
        forward
    })
}

fn better(ci: &CombinedInput, a: f64, b: f64) -> bool {
    if ci.is_exact() {
        a > b
    } else {
        a.above(b)
    }
}

/// QUICK as a [`SolutionSet`] with a single solution.
pub fn quick_consensus(ci: &CombinedInput) -> Result<SolutionSet> {
    let start = Instant::now();
    let best = quick_best_of_q(ci)?;
    Ok(SolutionSet {
        solutions: vec![best.candidate.canonicalize()],
        objective_dot: best.objective_dot,
        avg_tau_x: best.avg_tau_x,
        algorithm: Algorithm::Quick,
        elapsed: start.elapsed(),
        iterations: Some(best.passes),
        seed: None,
        nodes: None,
    })
}

/// Start ranking of FAST iteration `iter` (0-based, `iter >= 1`): a uniformly
/// random tie-free permutation from the stream derived from `(seed, iter)`.
pub fn random_start(labels: &Labels, seed: u64, iter: u64) -> Ranking {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iter);
    let mut perm: Vec<u32> = (1..=labels.len() as u32).collect();
    perm.shuffle(&mut rng);
    Ranking::from_dense_unchecked(labels.clone(), &perm)
}

fn fast_inner<T: Scalar>(ci: &CombinedInput, c: &SquareMatrix<T>, maxiter: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
    let costs = PairCosts::new(c);
    let q = initial_q(ci);
    let q_ranks = q.complete_ranks()?;
    let rev_ranks = q.reverse()?.complete_ranks()?;
    let runs: Vec<Vec<Vec<u32>>> = (0..maxiter)
        .into_par_iter()
        .map(|it| {
            if it == 0 {
                vec![quick_ranks(&costs, &q_ranks).0, quick_ranks(&costs, &rev_ranks).0]
            } else {
                let start = random_start(ci.labels(), seed, it as u64);
                vec![quick_ranks(&costs, &start.complete_ranks().unwrap()).0]
            }
        })
        .collect();
    let v = abs_sum(c);
    let scored: Vec<(Vec<u32>, T)> = runs
        .into_iter()
        .flatten()
        .map(|r| {
            let p = v - dot_of_ranks(c, &r);
            (r, p)
        })
        .collect();
    let best = scored
        .iter()
        .map(|(_, p)| *p)
        .reduce(|a, b| if b.below(a) { b } else { a })
        .unwrap();
    Ok(scored
        .into_iter()
        .filter(|(_, p)| p.same(best))
        .map(|(r, _)| r)
        .collect())
}

/// FAST: QUICK from the Q vector and its reverse, then from `maxiter - 1`
/// random permutations; returns every distinct candidate with the best
/// objective.
pub fn fast(ci: &CombinedInput, maxiter: usize, seed: u64) -> Result<SolutionSet> {
    if maxiter == 0 {
        return Err(Error::Config("maxiter must be at least 1".into()));
    }
    let start = Instant::now();
    let best = match ci.values() {
        CiValues::Integer(c) => fast_inner(ci, c, maxiter, seed)?,
        CiValues::Real(c) => fast_inner(ci, c, maxiter, seed)?,
    };
    let elapsed = start.elapsed();
    let labels = ci.labels().clone();
    let solutions = canonical_sorted(
        best.iter()
            .map(|r| Ranking::from_dense_unchecked(labels.clone(), r)),
    );
    let objective_dot = ci.ranking_dot(&solutions[0])?;
    Ok(SolutionSet {
        solutions,
        objective_dot,
        avg_tau_x: ci.avg_tau_x(objective_dot),
        algorithm: Algorithm::Fast,
        elapsed,
        iterations: Some(maxiter),
        seed: Some(seed),
        nodes: None,
    })
}
