//! Distances and rank correlations between two rankings.
//!
//! Both arguments must describe the same object set. When the label order
//! differs, the second ranking is re-expressed in the first one's order.

use crate::error::{Error, Result};
use crate::ranking::{pair_score, Convention, Ranking};

fn aligned(r1: &Ranking, r2: &Ranking) -> Result<Vec<Option<u32>>> {
    if r1.labels() == r2.labels() {
        Ok(r2.ranks().to_vec())
    } else {
        Ok(r2.relabel_to(r1.labels())?.ranks().to_vec())
    }
}

/// Kemeny distance on raw rank vectors. Pairs where either side is unranked
/// contribute nothing.
pub(crate) fn kemeny_raw(a: &[Option<u32>], b: &[Option<u32>]) -> u64 {
    let m = a.len();
    let mut total = 0u64;
    for i in 0..m {
        for j in (i + 1)..m {
            if let (Some(ai), Some(aj), Some(bi), Some(bj)) = (a[i], a[j], b[i], b[j]) {
                let x = pair_score(ai, aj, Convention::Kendall);
                let y = pair_score(bi, bj, Convention::Kendall);
                // both cells of the pair carry |x - y|; the 1/2 cancels one
                total += (x - y).unsigned_abs() as u64;
            }
        }
    }
    total
}

/// Kemeny distance: half the summed absolute difference of the two Kendall
/// score matrices. Unranked objects do not contribute.
pub fn kemeny_distance(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let b = aligned(r1, r2)?;
    Ok(kemeny_raw(r1.ranks(), &b) as f64)
}

/// Emond–Mason rank correlation: ties count as agreement in both cells.
pub fn tau_x(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let b = aligned(r1, r2)?;
    let a = r1.ranks();
    if a.iter().chain(b.iter()).any(Option::is_none) {
        return Err(Error::MissingRank);
    }
    let m = a.len();
    if m < 2 {
        return Err(Error::Undefined("tau_x needs at least two objects".into()));
    }
    let mut sum = 0i64;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let x = pair_score(a[i].unwrap(), a[j].unwrap(), Convention::EmondMason);
                let y = pair_score(b[i].unwrap(), b[j].unwrap(), Convention::EmondMason);
                sum += (x * y) as i64;
            }
        }
    }
    Ok(sum as f64 / (m * (m - 1)) as f64)
}

/// Kendall's generalised correlation over Kendall score matrices.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let b = aligned(r1, r2)?;
    let a = r1.ranks();
    if a.iter().chain(b.iter()).any(Option::is_none) {
        return Err(Error::MissingRank);
    }
    let m = a.len();
    let (mut ab, mut aa, mut bb) = (0i64, 0i64, 0i64);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let x = pair_score(a[i].unwrap(), a[j].unwrap(), Convention::Kendall) as i64;
                let y = pair_score(b[i].unwrap(), b[j].unwrap(), Convention::Kendall) as i64;
                ab += x * y;
                aa += x * x;
                bb += y * y;
            }
        }
    }
    if aa == 0 || bb == 0 {
        return Err(Error::Undefined(
            "kendall tau of an all-tied ranking has a zero denominator".into(),
        ));
    }
    Ok(ab as f64 / ((aa as f64) * (bb as f64)).sqrt())
}

/// Spearman's rho, `1 - 6 sum(d^2) / (m^3 - m)`, for tie-free complete rankings.
pub fn spearman_rho(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let r2 = Ranking::new(r1.labels().clone(), aligned(r1, r2)?)?;
    if r1.has_ties() || r2.has_ties() {
        return Err(Error::TiesPresent);
    }
    let a = crate::ranking::dense(&r1.complete_ranks()?);
    let b = crate::ranking::dense(&r2.complete_ranks()?);
    let m = a.len() as i64;
    if m < 2 {
        return Err(Error::Undefined("spearman rho needs at least two objects".into()));
    }
    let d2: i64 = a
        .iter()
        .zip(&b)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            d * d
        })
        .sum();
    Ok(1.0 - (6 * d2) as f64 / (m * m * m - m) as f64)
}
