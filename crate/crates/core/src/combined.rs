//! The combined input (CI) matrix: weighted sum of every judge's
//! Emond–Mason score matrix, and the objective/penalty evaluated against it.

use crate::dataset::RankingDataset;
use crate::error::{Error, Result};
use crate::ranking::{pair_score, Convention, Labels, Ranking, ScoreMatrix};
use crate::scalar::{Scalar, SquareMatrix};

/// CI entries, kept in exact integers whenever every weight is integral.
#[derive(Clone, Debug, PartialEq)]
pub enum CiValues {
    Integer(SquareMatrix<i64>),
    Real(SquareMatrix<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinedInput {
    labels: Labels,
    values: CiValues,
    total_weight: f64,
}

impl CombinedInput {
    pub fn from_dataset(d: &RankingDataset) -> Self {
        let values = if d.has_integer_weights() {
            CiValues::Integer(accumulate(d, |w| w as i64))
        } else {
            CiValues::Real(accumulate(d, |w| w))
        };
        CombinedInput {
            labels: d.labels().clone(),
            values,
            total_weight: d.total_weight(),
        }
    }

    /// CI supplied directly, e.g. from a published matrix.
    pub fn from_integer_matrix(labels: Labels, c: SquareMatrix<i64>, total_weight: f64) -> Result<Self> {
        check_matrix(&labels, c.dim(), total_weight)?;
        Ok(CombinedInput {
            labels,
            values: CiValues::Integer(c),
            total_weight,
        })
    }

    pub fn from_real_matrix(labels: Labels, c: SquareMatrix<f64>, total_weight: f64) -> Result<Self> {
        check_matrix(&labels, c.dim(), total_weight)?;
        Ok(CombinedInput {
            labels,
            values: CiValues::Real(c),
            total_weight,
        })
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn values(&self) -> &CiValues {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, CiValues::Integer(_))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.values {
            CiValues::Integer(c) => c.get(i, j) as f64,
            CiValues::Real(c) => c.get(i, j),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let m = self.num_objects();
        (0..m).map(|i| (0..m).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `V`, the sum of absolute CI entries; an upper bound on the objective.
    pub fn abs_sum(&self) -> f64 {
        match &self.values {
            CiValues::Integer(c) => abs_sum(c).to_f64(),
            CiValues::Real(c) => abs_sum(c),
        }
    }

    /// Average τx implied by an objective value: `dot / (W m (m-1))`.
    pub fn avg_tau_x(&self, dot: f64) -> f64 {
        let m = self.num_objects() as f64;
        dot / (self.total_weight * m * (m - 1.0))
    }

    fn check_dim(&self, s: &ScoreMatrix) -> Result<()> {
        if s.dim() != self.num_objects() {
            return Err(Error::DimensionMismatch {
                expected: self.num_objects(),
                actual: s.dim(),
            });
        }
        Ok(())
    }

    /// Objective `sum_ij s_ij c_ij` for a candidate score matrix.
    pub fn objective_dot(&self, s: &ScoreMatrix) -> Result<f64> {
        self.check_dim(s)?;
        Ok(match &self.values {
            CiValues::Integer(c) => dot(c, s.entries()).to_f64(),
            CiValues::Real(c) => dot(c, s.entries()),
        })
    }

    /// Penalty `V - dot`; zero iff the candidate agrees with every CI sign.
    pub fn total_penalty(&self, s: &ScoreMatrix) -> Result<f64> {
        self.check_dim(s)?;
        Ok(match &self.values {
            CiValues::Integer(c) => (abs_sum(c) - dot(c, s.entries())).to_f64(),
            CiValues::Real(c) => (abs_sum(c) - dot(c, s.entries())).max(0.0),
        })
    }

    /// Objective of a complete candidate ranking, re-expressed in CI label order.
    pub fn ranking_dot(&self, candidate: &Ranking) -> Result<f64> {
        let candidate = self.align(candidate)?;
        self.objective_dot(&candidate.score_matrix(Convention::EmondMason))
    }

    pub fn ranking_penalty(&self, candidate: &Ranking) -> Result<f64> {
        let candidate = self.align(candidate)?;
        self.total_penalty(&candidate.score_matrix(Convention::EmondMason))
    }

    pub(crate) fn align(&self, candidate: &Ranking) -> Result<Ranking> {
        let r = if candidate.labels() == &self.labels {
            candidate.clone()
        } else {
            candidate.relabel_to(&self.labels)?
        };
        if !r.is_complete() {
            return Err(Error::MissingRank);
        }
        Ok(r)
    }
}

fn check_matrix(labels: &Labels, dim: usize, total_weight: f64) -> Result<()> {
    if dim != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: dim,
        });
    }
    if !(total_weight.is_finite() && total_weight > 0.0) {
        return Err(Error::InvalidDataset("total weight must be positive".into()));
    }
    Ok(())
}

fn accumulate<T: Scalar>(d: &RankingDataset, conv: impl Fn(f64) -> T) -> SquareMatrix<T> {
    let m = d.num_objects();
    let mut c = SquareMatrix::filled(m, T::ZERO);
    for (r, w) in d.rows() {
        let w = conv(*w);
        let ranks = r.ranks();
        for (i, ri) in ranks.iter().enumerate() {
            let Some(ri) = *ri else { continue };
            for (j, rj) in ranks.iter().enumerate() {
                if i == j {
                    continue;
                }
                if let Some(rj) = *rj {
                    let s = T::from_score(pair_score(ri, rj, Convention::EmondMason));
                    c.set(i, j, c.get(i, j) + s * w);
                }
            }
        }
    }
    c
}

pub(crate) fn abs_sum<T: Scalar>(c: &SquareMatrix<T>) -> T {
    let mut v = T::ZERO;
    for &x in c.as_slice() {
        v += x.abs();
    }
    v
}

pub(crate) fn dot<T: Scalar>(c: &SquareMatrix<T>, s: &[i8]) -> T {
    let mut acc = T::ZERO;
    for (&x, &y) in c.as_slice().iter().zip(s) {
        if y != 0 {
            acc += x * T::from_score(y);
        }
    }
    acc
}

/// Objective of a dense complete rank vector, without building a [`ScoreMatrix`].
pub(crate) fn dot_of_ranks<T: Scalar>(c: &SquareMatrix<T>, ranks: &[u32]) -> T {
    let m = ranks.len();
    let mut acc = T::ZERO;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                acc += c.get(i, j) * T::from_score(pair_score(ranks[i], ranks[j], Convention::EmondMason));
            }
        }
    }
    acc
}
