//! Median (Kemeny) consensus ranking for weighted full, tied and partial
//! rankings.
//!
//! The combined input matrix ([`CombinedInput`]) summarises a dataset; the
//! exact [`bb`] search and the [`heuristic`] QUICK/FAST solvers maximise its
//! dot product with a candidate's score matrix, which is equivalent to
//! minimising the total weighted Kemeny distance to the judges.

pub mod bb;
pub mod classical;
pub mod combined;
pub mod dataset;
pub mod error;
pub mod heuristic;
pub mod io;
pub mod metrics;
pub mod ranking;
pub mod report;
pub mod scalar;
pub mod sim;
pub mod solution;
pub mod weak_orders;

pub use bb::{bb_consensus, bb_solve, branch_penalty, BbOptions, Branch, Incumbent};
pub use classical::{borda, borda_solution, condorcet_consensus, condorcet_solution, condorcet_support, SupportMatrix};
pub use combined::{CiValues, CombinedInput};
pub use dataset::RankingDataset;
pub use error::{Error, Result};
pub use heuristic::{fast, initial_q, quick, quick_best_of_q, quick_consensus, HeuristicResult};
pub use io::{dataset_digest, dataset_to_string, parse_dataset, parse_dataset_str, write_atomic, write_dataset};
pub use metrics::{kemeny_distance, kendall_tau, spearman_rho, tau_x};
pub use ranking::{Convention, Labels, Ranking, ScoreMatrix};
pub use report::{ReportedSolution, RunReport};
pub use sim::{
    model_pmf, run_experiment, sample, sample_incomplete, ExperimentConfig, ExperimentReport, ModelPmf, ModelSpec, Space,
};
pub use solution::{Algorithm, SolutionSet};
pub use weak_orders::{approx_weak_order_count, enumerate_weak_orders};
