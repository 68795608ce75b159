//! Reference implementations written directly from the definitions, kept
//! independent of the library's matrix code.
#![allow(dead_code)]

use medrank::{Ranking, RankingDataset};

/// Emond–Mason score of an ordered pair: +1 ahead or tied, -1 behind,
/// 0 when either object is unranked.
pub fn em(a: Option<u32>, b: Option<u32>) -> i64 {
    match (a, b) {
        (Some(x), Some(y)) if x <= y => 1,
        (Some(_), Some(_)) => -1,
        _ => 0,
    }
}

/// Kendall score: +1 ahead, -1 behind, 0 tied or unranked.
pub fn kendall(a: Option<u32>, b: Option<u32>) -> i64 {
    match (a, b) {
        (Some(x), Some(y)) => (y as i64 - x as i64).signum(),
        _ => 0,
    }
}

pub fn kemeny(a: &[Option<u32>], b: &[Option<u32>]) -> i64 {
    let m = a.len();
    let mut s = 0;
    for i in 0..m {
        for j in 0..m {
            if i != j && [a[i], a[j], b[i], b[j]].iter().all(Option::is_some) {
                s += (kendall(a[i], a[j]) - kendall(b[i], b[j])).abs();
            }
        }
    }
    s / 2
}

/// Weighted objective of a candidate computed row by row, without forming
/// the combined matrix.
pub fn objective(d: &RankingDataset, cand: &[u32]) -> f64 {
    let m = cand.len();
    let mut total = 0.0;
    for (r, w) in d.rows() {
        let rr = r.ranks();
        let mut s = 0i64;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    s += em(Some(cand[i]), Some(cand[j])) * em(rr[i], rr[j]);
                }
            }
        }
        total += w * s as f64;
    }
    total
}

/// Every weak order of `m` objects as dense rank vectors, by filling
/// positions with values up to one above the current maximum.
pub fn all_weak_orders(m: usize) -> Vec<Vec<u32>> {
    fn go(m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == m {
            let mut used: Vec<u32> = cur.clone();
            used.sort_unstable();
            used.dedup();
            if used.iter().enumerate().all(|(i, &v)| v == i as u32 + 1) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 1..=m as u32 {
            cur.push(v);
            go(m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, &mut Vec::new(), &mut out);
    out
}

/// Ordered Bell numbers: a(0) = 1, a(n) = sum_k C(n, k) a(n - k).
pub fn fubini(n: usize) -> u64 {
    let mut a = vec![1u64];
    for k in 1..=n {
        let mut s = 0u64;
        let mut binom = 1u64;
        for j in 1..=k {
            binom = binom * (k - j + 1) as u64 / j as u64;
            s += binom * a[k - j];
        }
        a.push(s);
    }
    a[n]
}

/// Brute-force optimum and the set of maximisers over all weak orders.
pub fn brute_force(d: &RankingDataset) -> (f64, Vec<Vec<u32>>) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = Vec::new();
    for cand in all_weak_orders(d.num_objects()) {
        let v = objective(d, &cand);
        if v > best {
            best = v;
            arg = vec![cand];
        } else if v == best {
            arg.push(cand);
        }
    }
    arg.sort();
    (best, arg)
}

pub fn ranks_of(r: &Ranking) -> Vec<u32> {
    r.canonicalize().complete_ranks().unwrap()
}
