use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ranking::Ranking;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bb,
    Quick,
    Fast,
    Borda,
    Condorcet,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Bb => "bb",
            Algorithm::Quick => "quick",
            Algorithm::Fast => "fast",
            Algorithm::Borda => "borda",
            Algorithm::Condorcet => "condorcet",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "bb" => Ok(Algorithm::Bb),
            "quick" => Ok(Algorithm::Quick),
            "fast" => Ok(Algorithm::Fast),
            "borda" => Ok(Algorithm::Borda),
            "condorcet" => Ok(Algorithm::Condorcet),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Distinct median rankings sharing one objective value.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub solutions: Vec<Ranking>,
    pub objective_dot: f64,
    pub avg_tau_x: f64,
    pub algorithm: Algorithm,
    pub elapsed: Duration,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    /// Search nodes visited (branch-and-bound only).
    pub nodes: Option<u64>,
}

impl SolutionSet {
    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn contains(&self, r: &Ranking) -> bool {
        let c = r.canonicalize();
        self.solutions.contains(&c)
    }

    /// Number of solutions also present in `other`.
    pub fn overlap(&self, other: &SolutionSet) -> usize {
        self.solutions.iter().filter(|s| other.contains(s)).count()
    }
}

/// Canonicalizes, deduplicates and sorts rankings lexicographically by rank
/// sequence.
pub fn canonical_sorted(rankings: impl IntoIterator<Item = Ranking>) -> Vec<Ranking> {
    let mut v: Vec<Ranking> = rankings.into_iter().map(|r| r.canonicalize()).collect();
    v.sort_by(|a, b| a.ranks().cmp(b.ranks()));
    v.dedup();
    v
}
