//! Schema-versioned JSON record of one consensus run.

use serde::{Deserialize, Serialize};

use crate::combined::CombinedInput;
use crate::error::{Error, Result};
use crate::solution::{Algorithm, SolutionSet};

pub const RUN_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportedSolution {
    pub ranks: Vec<u32>,
    pub ordering: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub algorithm: Algorithm,
    pub input_digest: String,
    pub labels: Vec<String>,
    pub m: usize,
    pub total_weight: f64,
    pub solutions: Vec<ReportedSolution>,
    pub objective_dot: f64,
    pub avg_tau_x: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

impl RunReport {
    pub fn new(set: &SolutionSet, ci: &CombinedInput, input_digest: String, record_timing: bool) -> Result<Self> {
        let solutions = set
            .solutions
            .iter()
            .map(|r| {
                let r = ci.align(r)?.canonicalize();
                Ok(ReportedSolution {
                    ranks: r.complete_ranks()?,
                    ordering: r.ordering_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RunReport {
            schema_version: RUN_SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            algorithm: set.algorithm,
            input_digest,
            labels: ci.labels().as_slice().to_vec(),
            m: ci.num_objects(),
            total_weight: ci.total_weight(),
            solutions,
            objective_dot: set.objective_dot,
            avg_tau_x: set.avg_tau_x,
            elapsed_ms: record_timing.then(|| set.elapsed_ms()),
            iterations: set.iterations,
            seed: set.seed,
            nodes: set.nodes,
        })
    }

    /// Checks that `avg_tau_x` follows from the objective, `W` and `m`, and
    /// that the solutions are canonical and sorted.
    pub fn validate(&self) -> Result<()> {
        let m = self.m as f64;
        let expected = self.objective_dot / (self.total_weight * m * (m - 1.0));
        if (expected - self.avg_tau_x).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "avg_tau_x {} does not match objective_dot {} (expected {expected})",
                self.avg_tau_x, self.objective_dot
            )));
        }
        if self.labels.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: self.labels.len(),
            });
        }
        for s in &self.solutions {
            if s.ranks.len() != self.m || crate::ranking::dense(&s.ranks) != s.ranks {
                return Err(Error::Config(format!("solution {:?} is not canonical", s.ranks)));
            }
        }
        if !self.solutions.windows(2).all(|w| w[0].ranks < w[1].ranks) {
            return Err(Error::Config("solutions are not sorted".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}
