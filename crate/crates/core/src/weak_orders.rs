//! Exhaustive enumeration of the ranking space for small `m`.

use crate::error::{Error, Result};
use crate::ranking::{Labels, Ranking};

/// Largest `m` accepted by the enumerators (4683 weak orders at m = 6,
/// 47293 at m = 7).
pub const MAX_ENUMERABLE: usize = 7;

fn guard(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Config("at least one object is required".into()));
    }
    if m > MAX_ENUMERABLE {
        return Err(Error::SizeCap {
            what: "objects",
            value: m,
            limit: MAX_ENUMERABLE,
        });
    }
    Ok(())
}

/// Every complete weak order of `m` objects (ties allowed) as dense rank
/// vectors, in lexicographic order.
pub fn weak_order_ranks(m: usize) -> Result<Vec<Vec<u32>>> {
    guard(m)?;
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    let mut used = vec![0usize; m + 1];
    fill(0, &mut cur, &mut used, &mut out);
    Ok(out)
}

// A vector is a dense weak order iff its values cover 1..=max without gaps.
fn fill(pos: usize, cur: &mut Vec<u32>, used: &mut Vec<usize>, out: &mut Vec<Vec<u32>>) {
    let m = cur.len();
    if pos == m {
        let max = *cur.iter().max().unwrap() as usize;
        if (1..=max).all(|v| used[v] > 0) {
            out.push(cur.clone());
        }
        return;
    }
    for v in 1..=m {
        let distinct_missing = (1..v).filter(|&u| used[u] == 0).count();
        if distinct_missing > m - pos - 1 {
            continue;
        }
        cur[pos] = v as u32;
        used[v] += 1;
        fill(pos + 1, cur, used, out);
        used[v] -= 1;
    }
}

/// Every strict ranking (permutation) of `m` objects as rank vectors.
pub fn permutation_ranks(m: usize) -> Result<Vec<Vec<u32>>> {
    guard(m)?;
    Ok(weak_order_ranks(m)?
        .into_iter()
        .filter(|r| r.iter().max() == Some(&(m as u32)))
        .collect())
}

pub fn enumerate_weak_orders(m: usize) -> Result<Vec<Ranking>> {
    let labels = Labels::default_for(m);
    Ok(weak_order_ranks(m)?
        .iter()
        .map(|r| Ranking::from_dense_unchecked(labels.clone(), r))
        .collect())
}

/// Asymptotic count of weak orders, `m! / (2 (ln 2)^(m+1))`.
pub fn approx_weak_order_count(m: usize) -> f64 {
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    0.5 * (1.0 / std::f64::consts::LN_2).powi(m as i32 + 1) * factorial
}
