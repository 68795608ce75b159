//! Rankings over labelled objects and their pairwise score matrices.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared, immutable list of distinct object identifiers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Labels(Arc<[String]>);

impl Labels {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidRanking("no objects".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::InvalidRanking("empty object label".into()));
            }
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidRanking(format!("duplicate object label `{l}`")));
            }
        }
        Ok(Labels(labels.into()))
    }

    /// `A`, `B`, ... for up to 26 objects, `O1`, `O2`, ... beyond that.
    pub fn default_for(m: usize) -> Self {
        let labels: Vec<String> = if m <= 26 {
            (0..m).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
        } else {
            (1..=m).map(|i| format!("O{i}")).collect()
        };
        Labels(labels.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    /// For every position of `other`, the index of the same label in `self`.
    pub fn alignment(&self, other: &Labels) -> Result<Vec<usize>> {
        if self.len() != other.len() {
            return Err(Error::LabelMismatch(format!(
                "{} objects vs {} objects",
                self.len(),
                other.len()
            )));
        }
        other
            .0
            .iter()
            .map(|l| {
                self.position(l)
                    .ok_or_else(|| Error::LabelMismatch(format!("object `{l}` not shared")))
            })
            .collect()
    }
}

impl fmt::Debug for Labels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// One judge's preference: a rank per object, `None` when the object is unranked.
///
/// Lower rank values are preferred. Only the relative order of the values is
/// meaningful, so `(3, 7, 7)` and `(1, 2, 2)` describe the same weak order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    labels: Labels,
    ranks: Vec<Option<u32>>,
}

impl Ranking {
    pub fn new(labels: Labels, ranks: Vec<Option<u32>>) -> Result<Self> {
        if ranks.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                actual: ranks.len(),
            });
        }
        if ranks.contains(&Some(0)) {
            return Err(Error::InvalidRanking("rank values must be positive".into()));
        }
        if ranks.iter().all(Option::is_none) {
            return Err(Error::InvalidRanking("at least one object must be ranked".into()));
        }
        Ok(Ranking { labels, ranks })
    }

    /// Complete ranking with default labels.
    pub fn from_ranks(ranks: &[u32]) -> Result<Self> {
        Self::new(
            Labels::default_for(ranks.len()),
            ranks.iter().map(|&r| Some(r)).collect(),
        )
    }

    /// Possibly partial ranking with default labels.
    pub fn from_partial(ranks: &[Option<u32>]) -> Result<Self> {
        Self::new(Labels::default_for(ranks.len()), ranks.to_vec())
    }

    /// Builds a ranking from an ordering of buckets, best first. Objects not
    /// mentioned are unranked.
    pub fn from_buckets(labels: Labels, buckets: &[Vec<usize>]) -> Result<Self> {
        let mut ranks = vec![None; labels.len()];
        for (level, bucket) in buckets.iter().enumerate() {
            for &o in bucket {
                if o >= ranks.len() || ranks[o].is_some() {
                    return Err(Error::InvalidRanking(format!("object index {o} repeated or out of range")));
                }
                ranks[o] = Some(level as u32 + 1);
            }
        }
        Self::new(labels, ranks)
    }

    pub(crate) fn from_dense_unchecked(labels: Labels, ranks: &[u32]) -> Self {
        Ranking {
            labels,
            ranks: ranks.iter().map(|&r| Some(r)).collect(),
        }
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn ranks(&self) -> &[Option<u32>] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.ranks.iter().all(Option::is_some)
    }

    pub fn has_ties(&self) -> bool {
        let mut seen = HashSet::new();
        self.ranks.iter().flatten().any(|r| !seen.insert(*r))
    }

    /// Rank values of a complete ranking.
    pub fn complete_ranks(&self) -> Result<Vec<u32>> {
        self.ranks.iter().map(|r| r.ok_or(Error::MissingRank)).collect()
    }

    /// Dense form: ranks become `1..=g` with `g` the number of tie groups.
    pub fn canonicalize(&self) -> Ranking {
        Ranking {
            labels: self.labels.clone(),
            ranks: dense_partial(&self.ranks),
        }
    }

    pub fn is_canonical(&self) -> bool {
        dense_partial(&self.ranks) == self.ranks
    }

    /// Inverts every strict preference; ties stay ties.
    pub fn reverse(&self) -> Result<Ranking> {
        let ranks = self.complete_ranks()?;
        let dense = dense(&ranks);
        let groups = dense.iter().copied().max().unwrap_or(0);
        Ok(Ranking {
            labels: self.labels.clone(),
            ranks: dense.iter().map(|&r| Some(groups + 1 - r)).collect(),
        })
    }

    pub fn score_matrix(&self, convention: Convention) -> ScoreMatrix {
        ScoreMatrix::from_ranks(&self.ranks, convention)
    }

    /// Same weak order expressed over `target` label order.
    pub fn relabel_to(&self, target: &Labels) -> Result<Ranking> {
        let map = self.labels.alignment(target)?;
        Ok(Ranking {
            labels: target.clone(),
            ranks: map.iter().map(|&i| self.ranks[i]).collect(),
        })
    }

    /// Objects grouped by rank, best first; unranked objects are omitted.
    pub fn buckets(&self) -> Vec<Vec<usize>> {
        let mut by_rank: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, r) in self.ranks.iter().enumerate() {
            if let Some(r) = r {
                by_rank.entry(*r).or_default().push(i);
            }
        }
        by_rank.into_values().collect()
    }

    /// Human-readable ordering such as `D L (E-M) A`.
    pub fn ordering_string(&self) -> String {
        self.buckets()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&i| self.labels.get(i)).collect();
                if names.len() == 1 {
                    names[0].to_string()
                } else {
                    format!("({})", names.join("-"))
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ranking<{}>", self)
    }
}

impl fmt::Display for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .ranks
            .iter()
            .map(|r| r.map_or_else(|| "-".to_string(), |v| v.to_string()))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Order-preserving relabelling to `1..=g`.
pub fn dense(ranks: &[u32]) -> Vec<u32> {
    let mut distinct: Vec<u32> = ranks.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    ranks
        .iter()
        .map(|r| distinct.binary_search(r).unwrap() as u32 + 1)
        .collect()
}

fn dense_partial(ranks: &[Option<u32>]) -> Vec<Option<u32>> {
    let mut distinct: Vec<u32> = ranks.iter().flatten().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    ranks
        .iter()
        .map(|r| r.map(|v| distinct.binary_search(&v).unwrap() as u32 + 1))
        .collect()
}

/// How ties are scored in a [`ScoreMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Ties score `+1` in both cells; pairs touching an unranked object score 0.
    EmondMason,
    /// Ties score 0; the matrix is antisymmetric.
    Kendall,
}

/// Pairwise preference matrix with entries in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreMatrix {
    m: usize,
    entries: Vec<i8>,
    convention: Convention,
}

impl ScoreMatrix {
    pub(crate) fn from_ranks(ranks: &[Option<u32>], convention: Convention) -> Self {
        let m = ranks.len();
        let mut entries = vec![0i8; m * m];
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                if let (Some(a), Some(b)) = (ranks[i], ranks[j]) {
                    entries[i * m + j] = pair_score(a, b, convention);
                }
            }
        }
        ScoreMatrix {
            m,
            entries,
            convention,
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i8>> {
        self.entries.chunks(self.m).map(|r| r.to_vec()).collect()
    }
}

/// Score of object with rank `a` against object with rank `b`.
#[inline]
pub(crate) fn pair_score(a: u32, b: u32, convention: Convention) -> i8 {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Greater => -1,
        std::cmp::Ordering::Equal => match convention {
            Convention::EmondMason => 1,
            Convention::Kendall => 0,
        },
    }
}
