//! Shrinking a filter to at most `k` states.
//!
//! Two strategies: [`reduce_greedy`] merges one pair of states at a time,
//! always picking the merge closest to the original; [`reduce_global`] colors
//! a graph of state dissimilarities once and then builds many randomized
//! quotient filters from that coloring, keeping the best.

mod coloring;
mod global;
mod greedy;
mod merge;

use thiserror::Error;

pub use coloring::{
    build_complete_graph, improper_coloring, objective, Coloring, ColoringParams,
    WeightedCompleteGraph,
};
pub use global::{reduce_global, vote_construct, GlobalParams};
pub use greedy::{reduce_greedy, GreedyRound, GreedyTrace};
pub use merge::{merge, AddedEdge, MergeError, MergeOutcome};

use crate::distance::{DistanceResult, Metric};
use crate::filter::Filter;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub filter: Filter,
    /// Distance from the input filter to `filter`.
    pub distance: DistanceResult,
    pub metric: Metric,
    pub seed: Option<u64>,
    /// Merge rounds (greedy) or voting iterations (global).
    pub iterations: usize,
    /// Voting iteration that produced `filter`.
    pub best_iteration: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("target size k must be at least 1")]
    TargetSize,
    #[error("iteration count must be at least 1")]
    Iterations,
}

/// Result for a filter that already has at most `k` states.
fn unchanged(f: &Filter, metric: Metric, seed: Option<u64>) -> ReductionResult {
    ReductionResult {
        filter: f.clone(),
        distance: DistanceResult {
            value: Rational::from_integer(0),
            k_at_max: 0,
            k_reached: 0,
            converged: true,
        },
        metric,
        seed,
        iterations: 0,
        best_iteration: None,
    }
}
