//! Exact branch-and-bound search over weak orders.
//!
//! Objects are inserted one at a time in the order of an initial solution.
//! Each insertion branches over every slot relative to the objects already
//! placed (ahead of, tied with, or behind each tie group) and adds the
//! incremental pair penalty against every placed object. A branch is cut
//! only when its accumulated penalty strictly exceeds the best complete
//! ordering seen so far, so every optimum is enumerated.
//!
//! Internally penalties are kept on the `V - dot` scale, which is twice the
//! per-pair branch penalty and stays integral for integer weights.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::combined::{abs_sum, dot_of_ranks, CiValues, CombinedInput};
use crate::error::{Error, Result};
use crate::heuristic;
use crate::ranking::{dense, Ranking};
use crate::scalar::{Scalar, SquareMatrix};
use crate::solution::{canonical_sorted, Algorithm, SolutionSet};

/// Default cap on the number of objects the exact search accepts.
pub const DEFAULT_MAX_OBJECTS: usize = 20;

/// Relative position of object `i` with respect to object `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Ahead,
    Tied,
    Behind,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Ahead, Branch::Tied, Branch::Behind];

    fn scores(self) -> (i8, i8) {
        match self {
            Branch::Ahead => (1, -1),
            Branch::Tied => (1, 1),
            Branch::Behind => (-1, 1),
        }
    }
}

/// Incremental penalty of placing `i` relative to `j`:
/// `((|c_ij| + |c_ji|) - (s_ij c_ij + s_ji c_ji)) / 2`.
pub fn branch_penalty(c_ij: f64, c_ji: f64, branch: Branch) -> f64 {
    0.5 * pair_cost(c_ij, c_ji, branch)
}

/// Branch penalty without the halving; sums to `V - dot` over all pairs.
#[inline]
pub(crate) fn pair_cost<T: Scalar>(c_ij: T, c_ji: T, branch: Branch) -> T {
    let (s_ij, s_ji) = branch.scores();
    c_ij.abs() + c_ji.abs() - (c_ij * T::from_score(s_ij) + c_ji * T::from_score(s_ji))
}

/// Precomputed pair costs, indexed `[x * m + p]` for `x` placed relative to `p`.
pub(crate) struct PairCosts<T> {
    pub m: usize,
    ahead: Vec<T>,
    tied: Vec<T>,
    behind: Vec<T>,
}

impl<T: Scalar> PairCosts<T> {
    pub fn new(c: &SquareMatrix<T>) -> Self {
        let m = c.dim();
        let mut ahead = vec![T::ZERO; m * m];
        let mut tied = vec![T::ZERO; m * m];
        let mut behind = vec![T::ZERO; m * m];
        for x in 0..m {
            for p in 0..m {
                if x != p {
                    let (a, b) = (c.get(x, p), c.get(p, x));
                    ahead[x * m + p] = pair_cost(a, b, Branch::Ahead);
                    tied[x * m + p] = pair_cost(a, b, Branch::Tied);
                    behind[x * m + p] = pair_cost(a, b, Branch::Behind);
                }
            }
        }
        PairCosts { m, ahead, tied, behind }
    }

    #[inline]
    pub fn get(&self, x: usize, p: usize, branch: Branch) -> T {
        let k = x * self.m + p;
        match branch {
            Branch::Ahead => self.ahead[k],
            Branch::Tied => self.tied[k],
            Branch::Behind => self.behind[k],
        }
    }

    /// Cost of `x` at rank `level` against every other object of `levels`.
    #[inline]
    pub fn cost_at_level(&self, x: usize, level: i64, levels: &[i64]) -> T {
        let mut acc = T::ZERO;
        let row = x * self.m;
        for (p, &lp) in levels.iter().enumerate() {
            if p == x {
                continue;
            }
            acc += match level.cmp(&lp) {
                std::cmp::Ordering::Less => self.ahead[row + p],
                std::cmp::Ordering::Equal => self.tied[row + p],
                std::cmp::Ordering::Greater => self.behind[row + p],
            };
        }
        acc
    }

    /// Total penalty `V - dot` of a complete dense ranking.
    pub fn total(&self, ranks: &[u32]) -> T {
        let mut acc = T::ZERO;
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let b = match ranks[i].cmp(&ranks[j]) {
                    std::cmp::Ordering::Less => Branch::Ahead,
                    std::cmp::Ordering::Equal => Branch::Tied,
                    std::cmp::Ordering::Greater => Branch::Behind,
                };
                acc += self.get(i, j, b);
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Incumbent {
    /// Best QUICK result from the initial Q vector and its reverse.
    Quick,
    /// The initial Q vector itself.
    InitialQ,
}

#[derive(Clone, Debug)]
pub struct BbOptions {
    pub max_objects: usize,
    pub incumbent: Incumbent,
}

impl Default for BbOptions {
    fn default() -> Self {
        BbOptions {
            max_objects: DEFAULT_MAX_OBJECTS,
            incumbent: Incumbent::Quick,
        }
    }
}

/// A partially built weak order: tie groups over the objects inserted so far.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchNode {
    pub placed: Vec<Vec<usize>>,
    /// Sum of [`branch_penalty`] over all pairs inside `placed`.
    pub accumulated_penalty: f64,
}

#[derive(Clone)]
struct Node<T> {
    buckets: Vec<Vec<usize>>,
    acc: T,
    depth: usize,
}

impl<T: Scalar> Node<T> {
    fn public(&self) -> SearchNode {
        SearchNode {
            placed: self.buckets.clone(),
            accumulated_penalty: 0.5 * self.acc.to_f64(),
        }
    }
}

/// Cost of each of the `2b + 1` slots for object `x`, front to back:
/// new group before group 0, join group 0, new group between 0 and 1, ...
fn slot_costs<T: Scalar>(costs: &PairCosts<T>, x: usize, buckets: &[Vec<usize>], out: &mut Vec<T>) {
    out.clear();
    let mut sums: Vec<(T, T, T)> = Vec::with_capacity(buckets.len());
    let mut suffix_ahead = T::ZERO;
    for b in buckets {
        let (mut a, mut t, mut w) = (T::ZERO, T::ZERO, T::ZERO);
        for &p in b {
            a += costs.get(x, p, Branch::Ahead);
            t += costs.get(x, p, Branch::Tied);
            w += costs.get(x, p, Branch::Behind);
        }
        suffix_ahead += a;
        sums.push((a, t, w));
    }
    let mut prefix_behind = T::ZERO;
    for (a, t, w) in sums {
        out.push(prefix_behind + suffix_ahead);
        suffix_ahead = suffix_ahead - a;
        out.push(prefix_behind + t + suffix_ahead);
        prefix_behind += w;
    }
    out.push(prefix_behind + suffix_ahead);
}

fn apply_slot(buckets: &mut Vec<Vec<usize>>, slot: usize, x: usize) {
    if slot.is_multiple_of(2) {
        buckets.insert(slot / 2, vec![x]);
    } else {
        buckets[slot / 2].push(x);
    }
}

fn undo_slot(buckets: &mut Vec<Vec<usize>>, slot: usize) {
    if slot.is_multiple_of(2) {
        buckets.remove(slot / 2);
    } else {
        buckets[slot / 2].pop();
    }
}

fn buckets_to_ranks(m: usize, buckets: &[Vec<usize>]) -> Vec<u32> {
    let mut ranks = vec![0u32; m];
    for (level, b) in buckets.iter().enumerate() {
        for &o in b {
            ranks[o] = level as u32 + 1;
        }
    }
    ranks
}

struct Pool<T> {
    best: T,
    leaves: Vec<Vec<u32>>,
}

struct Shared<T> {
    pool: Mutex<Pool<T>>,
    bound_hint: AtomicU64,
    nodes: AtomicU64,
}

impl<T: Scalar> Shared<T> {
    fn bound(&self) -> T {
        T::from_f64(f64::from_bits(self.bound_hint.load(Ordering::Relaxed)))
    }

    fn offer(&self, acc: T, ranks: Vec<u32>) {
        let mut pool = self.pool.lock().unwrap();
        if acc.below(pool.best) {
            pool.best = acc;
            pool.leaves.clear();
            pool.leaves.push(ranks);
            self.bound_hint.store(acc.to_f64().to_bits(), Ordering::Relaxed);
        } else if acc.same(pool.best) {
            pool.leaves.push(ranks);
        }
    }
}

struct Worker<'a, T> {
    costs: &'a PairCosts<T>,
    order: &'a [usize],
    shared: &'a Shared<T>,
    nodes: u64,
    scratch: Vec<Vec<T>>,
}

impl<T: Scalar> Worker<'_, T> {
    fn dfs(&mut self, buckets: &mut Vec<Vec<usize>>, acc: T, depth: usize) {
        self.nodes += 1;
        let m = self.costs.m;
        if depth == m {
            self.shared.offer(acc, buckets_to_ranks(m, buckets));
            return;
        }
        let x = self.order[depth];
        let mut slots = std::mem::take(&mut self.scratch[depth]);
        slot_costs(self.costs, x, buckets, &mut slots);
        for (slot, &cost) in slots.iter().enumerate() {
            let child = acc + cost;
            if child.above(self.shared.bound()) {
                continue;
            }
            apply_slot(buckets, slot, x);
            self.dfs(buckets, child, depth + 1);
            undo_slot(buckets, slot);
        }
        self.scratch[depth] = slots;
    }
}

fn children<T: Scalar>(costs: &PairCosts<T>, order: &[usize], node: &Node<T>) -> Vec<Node<T>> {
    if node.depth == costs.m {
        return Vec::new();
    }
    let x = order[node.depth];
    let mut slots = Vec::new();
    slot_costs(costs, x, &node.buckets, &mut slots);
    slots
        .iter()
        .enumerate()
        .map(|(slot, &cost)| {
            let mut buckets = node.buckets.clone();
            apply_slot(&mut buckets, slot, x);
            Node {
                buckets,
                acc: node.acc + cost,
                depth: node.depth + 1,
            }
        })
        .collect()
}

/// Insertion order: by rank in the initial solution, ties by object index.
fn insertion_order(initial: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..initial.len()).collect();
    order.sort_by_key(|&i| (initial[i], i));
    order
}

struct Outcome<T> {
    best: T,
    leaves: Vec<Vec<u32>>,
    nodes: u64,
}

fn search<T: Scalar>(c: &SquareMatrix<T>, initial: &[u32]) -> Outcome<T> {
    let m = c.dim();
    let costs = PairCosts::new(c);
    let order = insertion_order(initial);
    let start_bound = abs_sum(c) - dot_of_ranks(c, initial);
    let shared = Shared {
        pool: Mutex::new(Pool {
            best: start_bound,
            leaves: Vec::new(),
        }),
        bound_hint: AtomicU64::new(start_bound.to_f64().to_bits()),
        nodes: AtomicU64::new(0),
    };

    // Breadth-first split into independent subtrees for the worker pool.
    let target = 32 * rayon::current_num_threads();
    let mut frontier = vec![Node {
        buckets: vec![vec![order[0]]],
        acc: T::ZERO,
        depth: 1,
    }];
    while !frontier.is_empty() && frontier.len() < target && frontier[0].depth < m {
        let bound = shared.bound();
        shared.nodes.fetch_add(frontier.len() as u64, Ordering::Relaxed);
        frontier = frontier
            .iter()
            .flat_map(|n| children(&costs, &order, n))
            .filter(|n| !n.acc.above(bound))
            .collect();
    }

    frontier.into_par_iter().for_each(|node| {
        let mut w = Worker {
            costs: &costs,
            order: &order,
            shared: &shared,
            nodes: 0,
            scratch: vec![Vec::new(); m + 1],
        };
        let mut buckets = node.buckets;
        if !node.acc.above(shared.bound()) {
            w.dfs(&mut buckets, node.acc, node.depth);
        }
        shared.nodes.fetch_add(w.nodes, Ordering::Relaxed);
    });

    let pool = shared.pool.into_inner().unwrap();
    Outcome {
        best: pool.best,
        leaves: pool.leaves,
        nodes: shared.nodes.into_inner(),
    }
}

fn check_size(ci: &CombinedInput, opts: &BbOptions) -> Result<()> {
    let m = ci.num_objects();
    if m < 2 {
        return Err(Error::Config("branch-and-bound needs at least two objects".into()));
    }
    if m > opts.max_objects {
        return Err(Error::SizeCap {
            what: "objects",
            value: m,
            limit: opts.max_objects,
        });
    }
    Ok(())
}

/// All weak orders minimising `V - dot`, searched from `initial`.
pub fn bb_solve(ci: &CombinedInput, initial: &Ranking, opts: &BbOptions) -> Result<SolutionSet> {
    check_size(ci, opts)?;
    let initial = ci.align(initial)?;
    let initial = dense(&initial.complete_ranks()?);
    let start = Instant::now();
    let (leaves, nodes) = match ci.values() {
        CiValues::Integer(c) => {
            let out = search(c, &initial);
            debug_assert!(out.leaves.iter().all(|r| PairCosts::new(c).total(r) == out.best));
            (out.leaves, out.nodes)
        }
        CiValues::Real(c) => {
            let out = search(c, &initial);
            (out.leaves, out.nodes)
        }
    };
    let elapsed = start.elapsed();
    let labels = ci.labels().clone();
    let solutions = canonical_sorted(
        leaves
            .iter()
            .map(|r| Ranking::from_dense_unchecked(labels.clone(), r)),
    );
    let objective_dot = ci.ranking_dot(&solutions[0])?;
    Ok(SolutionSet {
        solutions,
        objective_dot,
        avg_tau_x: ci.avg_tau_x(objective_dot),
        algorithm: Algorithm::Bb,
        elapsed,
        iterations: None,
        seed: None,
        nodes: Some(nodes),
    })
}

/// Runs [`bb_solve`] from the incumbent selected in `opts`. The reported
/// elapsed time includes building the incumbent.
pub fn bb_consensus(ci: &CombinedInput, opts: &BbOptions) -> Result<SolutionSet> {
    check_size(ci, opts)?;
    let start = Instant::now();
    let initial = match opts.incumbent {
        Incumbent::Quick => heuristic::quick_best_of_q(ci)?.candidate,
        Incumbent::InitialQ => heuristic::initial_q(ci),
    };
    let mut out = bb_solve(ci, &initial, opts)?;
    out.elapsed = start.elapsed();
    Ok(out)
}

/// Children of a search node, in visiting order, with the root being the
/// first object of `initial` placed alone. Exposed for inspection and tests.
pub fn expand(ci: &CombinedInput, initial: &Ranking, node: Option<&SearchNode>) -> Result<Vec<SearchNode>> {
    let initial = ci.align(initial)?;
    let initial = dense(&initial.complete_ranks()?);
    let order = insertion_order(&initial);
    fn go<T: Scalar>(c: &SquareMatrix<T>, order: &[usize], node: Option<&SearchNode>) -> Vec<SearchNode> {
        let costs = PairCosts::new(c);
        match node {
            None => vec![Node::<T> {
                buckets: vec![vec![order[0]]],
                acc: T::ZERO,
                depth: 1,
            }
            .public()],
            Some(n) => {
                let depth = n.placed.iter().map(Vec::len).sum();
                let internal = Node {
                    buckets: n.placed.clone(),
                    acc: T::from_f64(2.0 * n.accumulated_penalty),
                    depth,
                };
                children(&costs, order, &internal).iter().map(Node::public).collect()
            }
        }
    }
    Ok(match ci.values() {
        CiValues::Integer(c) => go(c, &order, node),
        CiValues::Real(c) => go(c, &order, node),
    })
}
