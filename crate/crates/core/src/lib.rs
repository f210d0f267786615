//! Combinatorial filters and their improper reduction.
//!
//! A filter reads observation strings and emits one color per visited state.
//! This crate measures how differently two filters behave in the worst case
//! (length-normalized Hamming or edit distance over shared strings) and
//! shrinks a filter to a target number of states while keeping that distance
//! to the original small.

pub mod distance;
pub mod experiment;
pub mod filter;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod reduce;
pub mod strings;

pub use distance::{
    distance, distance_edit, distance_hamming, self_weight_matrix, ConvergenceParams,
    DistanceConfig, DistanceResult, Metric,
};
pub use filter::{language_subset, Color, Filter, FilterBuilder, FilterDef, StateIndex};
pub use rational::Rational;
pub use reduce::{
    merge, reduce_global, reduce_greedy, GlobalParams, MergeOutcome, ReduceError, ReductionResult,
};
pub use strings::EditCosts;
