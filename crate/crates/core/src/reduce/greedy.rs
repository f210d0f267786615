use rayon::prelude::*;

use super::merge::{merge_indices, MergeOutcome};
use super::{unchanged, ReduceError, ReductionResult};
use crate::distance::{distance, DistanceConfig, DistanceResult};
use crate::filter::{Color, Filter, StateIndex};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyRound {
    /// Ids of the merged states, in merge order (the first keeps its color).
    pub pair: (String, String),
    /// Distance from the original filter after this merge.
    pub distance: Rational,
    /// Whether reachability and color checks were waived for this round.
    pub relaxed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GreedyTrace {
    pub rounds: Vec<GreedyRound>,
}

/// Repeatedly applies the merge that stays closest to `f` until at most `k`
/// states remain.
///
/// Candidates that strand a state or lose a color of `f` are skipped; when a
/// round has nothing else, the checks are waived for that round only. Equal
/// distances go to the first pair in `(id, id)` order.
pub fn reduce_greedy(
    f: &Filter,
    k: usize,
    config: &DistanceConfig,
) -> Result<(ReductionResult, GreedyTrace), ReduceError> {
    if k < 1 {
        return Err(ReduceError::TargetSize);
    }
    if k >= f.len() {
        return Ok((unchanged(f, config.metric, None), GreedyTrace::default()));
    }
    let colors = f.used_colors();
    let mut current = f.clone();
    let mut last: Option<DistanceResult> = None;
    let mut trace = GreedyTrace::default();
    let mut relaxed = false;

    while current.len() > k {
        let pairs = ordered_pairs(&current);
        let best = pairs
            .par_iter()
            .enumerate()
            .filter_map(|(i, &(a, b))| {
                let out = merge_indices(&current, a, b);
                if !relaxed && !acceptable(&out, &colors) {
                    return None;
                }
                let d = distance(f, &out.filter, config);
                Some((d, i, out))
            })
            .min_by(|x, y| (x.0.value, x.1).cmp(&(y.0.value, y.1)));
        let Some((d, i, out)) = best else {
            debug_assert!(!relaxed, "a relaxed round always has candidates");
            relaxed = true;
            continue;
        };
        let (a, b) = pairs[i];
        trace.rounds.push(GreedyRound {
            pair: (
                current.state(a).id().to_string(),
                current.state(b).id().to_string(),
            ),
            distance: d.value,
            relaxed,
        });
        current = out.filter;
        last = Some(d);
        relaxed = false;
    }

    let rounds = trace.rounds.len();
    Ok((
        ReductionResult {
            filter: current,
            distance: last.expect("at least one merge"),
            metric: config.metric,
            seed: None,
            iterations: rounds,
            best_iteration: None,
        },
        trace,
    ))
}

/// All ordered pairs of distinct states, sorted by `(id, id)`.
fn ordered_pairs(f: &Filter) -> Vec<(StateIndex, StateIndex)> {
    let mut by_id: Vec<StateIndex> = (0..f.len()).collect();
    by_id.sort_by(|&a, &b| f.state(a).id().cmp(f.state(b).id()));
    by_id
        .iter()
        .flat_map(|&a| by_id.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect()
}

fn acceptable(out: &MergeOutcome, colors: &std::collections::BTreeSet<Color>) -> bool {
    !out.filter.has_unreachable_states() && colors.is_subset(&out.filter.used_colors())
}
