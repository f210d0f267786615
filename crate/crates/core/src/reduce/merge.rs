use std::collections::{BTreeMap, HashSet, VecDeque};

use thiserror::Error;

use crate::filter::{Filter, State, StateIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddedEdge {
    pub from: String,
    pub label: String,
    pub to: String,
}

#[derive(Debug, Clone)]
pub struct MergeOutcome {
    pub filter: Filter,
    pub merged_id: String,
    /// Edges inserted by post-processing to keep the original language.
    pub added_edges: Vec<AddedEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("cannot merge state `{0}` with itself")]
    SameState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
}

/// Replaces `q1` and `q2` with one state that keeps `q1`'s color and edges,
/// borrowing `q2`'s edges only for labels `q1` lacks. Edges are then added
/// wherever the original filter could read a label that the merged one no
/// longer can, so every string of `f` is still accepted.
pub fn merge(f: &Filter, q1: &str, q2: &str) -> Result<MergeOutcome, MergeError> {
    let a = f
        .index_of(q1)
        .ok_or_else(|| MergeError::UnknownState(q1.to_string()))?;
    let b = f
        .index_of(q2)
        .ok_or_else(|| MergeError::UnknownState(q2.to_string()))?;
    if a == b {
        return Err(MergeError::SameState(q1.to_string()));
    }
    Ok(merge_indices(f, a, b))
}

pub(crate) fn merge_indices(f: &Filter, q1: StateIndex, q2: StateIndex) -> MergeOutcome {
    debug_assert_ne!(q1, q2);
    // q2's slot disappears; later states shift down by one.
    let map = |q: StateIndex| -> StateIndex {
        let q = if q == q2 { q1 } else { q };
        if q > q2 {
            q - 1
        } else {
            q
        }
    };
    let merged = map(q1);
    let merged_id = fresh_id(f, &format!("{}+{}", f.state(q1).id(), f.state(q2).id()));

    let mut edges: Vec<BTreeMap<String, StateIndex>> = Vec::with_capacity(f.len() - 1);
    let mut ids = Vec::with_capacity(f.len() - 1);
    let mut colors = Vec::with_capacity(f.len() - 1);
    for (q, s) in f.states().iter().enumerate() {
        if q == q2 {
            continue;
        }
        let mut out: BTreeMap<String, StateIndex> =
            s.edges().iter().map(|(y, &t)| (y.clone(), map(t))).collect();
        if q == q1 {
            for (y, &t) in f.state(q2).edges() {
                out.entry(y.clone()).or_insert_with(|| map(t));
            }
            ids.push(merged_id.clone());
        } else {
            ids.push(s.id().to_string());
        }
        colors.push(s.color());
        edges.push(out);
    }

    let added = close_language(
        f,
        &mut edges,
        map,
        &[(q2, merged), (f.initial(), map(f.initial()))],
    );

    let added_edges = added
        .into_iter()
        .map(|(from, label, to)| AddedEdge {
            from: ids[from].clone(),
            label,
            to: ids[to].clone(),
        })
        .collect();
    let states = ids
        .into_iter()
        .zip(colors)
        .zip(edges)
        .map(|((id, color), out)| State::new(id, color, out))
        .collect();
    MergeOutcome {
        filter: Filter::from_states(states, map(f.initial()), f.observation_space().clone()),
        merged_id,
        added_edges,
    }
}

/// Forward search over pairs (state of `f`, state of the new filter) from
/// `seeds`. Wherever `f` can read a label the new state cannot, adds an edge
/// to the image of `f`'s successor under `map`. Afterwards the new filter
/// accepts every string `f` accepts from each seed pair. Returns the added
/// edges as (from, label, to).
pub(crate) fn close_language(
    f: &Filter,
    edges: &mut [BTreeMap<String, StateIndex>],
    map: impl Fn(StateIndex) -> StateIndex,
    seeds: &[(StateIndex, StateIndex)],
) -> Vec<(StateIndex, String, StateIndex)> {
    let mut added = Vec::new();
    let mut seen: HashSet<(StateIndex, StateIndex)> = HashSet::new();
    let mut queue = VecDeque::new();
    for &seed in seeds {
        if seen.insert(seed) {
            queue.push_back(seed);
        }
    }
    while let Some((qa, qb)) = queue.pop_front() {
        for (y, &qa2) in f.state(qa).edges() {
            let qb2 = match edges[qb].get(y) {
                Some(&t) => t,
                None => {
                    let t = map(qa2);
                    edges[qb].insert(y.clone(), t);
                    added.push((qb, y.clone(), t));
                    t
                }
            };
            if seen.insert((qa2, qb2)) {
                queue.push_back((qa2, qb2));
            }
        }
    }
    added
}

fn fresh_id(f: &Filter, base: &str) -> String {
    if f.index_of(base).is_none() {
        return base.to_string();
    }
    (2..)
        .map(|n| format!("{base}~{n}"))
        .find(|id| f.index_of(id).is_none())
        .expect("some suffix is free")
}
