use crate::error::{Error, Result};
use crate::ranking::{Labels, Ranking};

/// Largest weight treated as an exact integer (2^53).
const MAX_EXACT_WEIGHT: f64 = 9_007_199_254_740_992.0;

/// A weighted collection of rankings over a shared object set.
///
/// Rows are stored in canonical (dense) form.
#[derive(Clone, Debug, PartialEq)]
pub struct RankingDataset {
    labels: Labels,
    rows: Vec<(Ranking, f64)>,
}

impl RankingDataset {
    pub fn new(labels: Labels, rows: Vec<(Ranking, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDataset("no rankings".into()));
        }
        let mut canonical = Vec::with_capacity(rows.len());
        for (k, (r, w)) in rows.into_iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidDataset(format!(
                    "row {}: weight must be positive, got {w}",
                    k + 1
                )));
            }
            let r = if r.labels() == &labels {
                r
            } else {
                r.relabel_to(&labels).map_err(|e| {
                    Error::InvalidDataset(format!("row {}: {e}", k + 1))
                })?
            };
            canonical.push((r.canonicalize(), w));
        }
        for j in 0..labels.len() {
            if canonical.iter().all(|(r, _)| r.ranks()[j].is_none()) {
                return Err(Error::InvalidDataset(format!(
                    "object `{}` is unranked in every row",
                    labels.get(j)
                )));
            }
        }
        Ok(RankingDataset {
            labels,
            rows: canonical,
        })
    }

    /// Complete rankings with default labels; convenient for tests and examples.
    pub fn from_weighted_ranks(rows: &[(&[u32], f64)]) -> Result<Self> {
        let m = rows
            .first()
            .map(|(r, _)| r.len())
            .ok_or_else(|| Error::InvalidDataset("no rankings".into()))?;
        let labels = Labels::default_for(m);
        let rows = rows
            .iter()
            .map(|(r, w)| {
                Ranking::new(labels.clone(), r.iter().map(|&v| Some(v)).collect()).map(|r| (r, *w))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(labels, rows)
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn rows(&self) -> &[(Ranking, f64)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn num_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn total_weight(&self) -> f64 {
        self.rows.iter().map(|(_, w)| w).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|(r, _)| r.is_complete())
    }

    /// True when every weight is an integer small enough for exact `i64` sums.
    pub fn has_integer_weights(&self) -> bool {
        let total: f64 = self.total_weight();
        total < MAX_EXACT_WEIGHT && self.rows.iter().all(|(_, w)| w.fract() == 0.0)
    }
}
