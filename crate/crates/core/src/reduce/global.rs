use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::merge::close_language;
use super::coloring::{build_complete_graph, improper_coloring, ColoringParams};
use super::{unchanged, ReduceError, ReductionResult};
use crate::distance::{distance, DistanceConfig};
use crate::filter::{Filter, State, StateIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlobalParams {
    /// Voting iterations.
    pub iterations: usize,
    pub seed: u64,
    pub restarts: usize,
    pub local_moves: usize,
}

impl Default for GlobalParams {
    fn default() -> Self {
        let c = ColoringParams::default();
        Self {
            iterations: 400,
            seed: 0,
            restarts: c.restarts,
            local_moves: c.local_moves,
        }
    }
}

/// Quotient of `f` by a state coloring, with conflicts settled by lot.
///
/// Each color class becomes one state. Its output color is that of a
/// uniformly chosen member. For every label some member can read, a uniformly
/// chosen member among those that can decides which class the edge enters.
/// Missing edges are then added as in [`super::merge`] so the result accepts
/// every string `f` does.
pub fn vote_construct(f: &Filter, assignment: &[usize], rng: &mut impl Rng) -> Filter {
    assert_eq!(assignment.len(), f.len(), "coloring must cover every state");
    let mut groups: BTreeMap<usize, Vec<StateIndex>> = BTreeMap::new();
    for (q, &c) in assignment.iter().enumerate() {
        groups.entry(c).or_default().push(q);
    }
    let rank: BTreeMap<usize, usize> = groups.keys().enumerate().map(|(i, &c)| (c, i)).collect();
    let group_of = |q: StateIndex| rank[&assignment[q]];

    let mut ids = Vec::with_capacity(groups.len());
    let mut colors = Vec::with_capacity(groups.len());
    let mut edges: Vec<BTreeMap<String, usize>> = Vec::with_capacity(groups.len());
    for members in groups.values() {
        ids.push(
            members
                .iter()
                .map(|&q| f.state(q).id())
                .collect::<Vec<_>>()
                .join("+"),
        );
        colors.push(f.color(members[rng.gen_range(0..members.len())]));
        let labels: BTreeSet<&String> = members.iter().flat_map(|&q| f.state(q).edges().keys()).collect();
        edges.push(
            labels
                .into_iter()
                .map(|y| {
                    let voters: Vec<StateIndex> = members
                        .iter()
                        .copied()
                        .filter(|&q| f.successor(q, y).is_some())
                        .collect();
                    let q = voters[rng.gen_range(0..voters.len())];
                    let target = f.successor(q, y).expect("voter has the edge");
                    (y.clone(), group_of(target))
                })
                .collect(),
        );
    }
    // A vote can send a string into a group that lacks the next label the
    // original filter reads there; fill those gaps deterministically.
    let initial = group_of(f.initial());
    close_language(f, &mut edges, group_of, &[(f.initial(), initial)]);

    let states = ids
        .into_iter()
        .zip(colors)
        .zip(edges)
        .map(|((id, color), out)| State::new(id, color, out))
        .collect();
    Filter::from_states(states, initial, f.observation_space().clone())
}

/// Colors the dissimilarity graph of `f` once, then builds
/// `params.iterations` voted quotients and keeps the one closest to `f`
/// (earliest iteration on ties). Iteration `i` draws from its own random
/// stream, so the result does not depend on scheduling.
pub fn reduce_global(
    f: &Filter,
    k: usize,
    config: &DistanceConfig,
    params: &GlobalParams,
) -> Result<ReductionResult, ReduceError> {
    if k < 1 {
        return Err(ReduceError::TargetSize);
    }
    if params.iterations < 1 {
        return Err(ReduceError::Iterations);
    }
    if k >= f.len() {
        return Ok(unchanged(f, config.metric, Some(params.seed)));
    }
    let graph = build_complete_graph(f, config);
    let coloring = improper_coloring(
        &graph,
        k,
        &ColoringParams {
            restarts: params.restarts,
            local_moves: params.local_moves,
            seed: params.seed,
        },
    );

    let (d, it, filter) = (0..params.iterations)
        .into_par_iter()
        .map(|it| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(it as u64 + 1);
            let candidate = vote_construct(f, &coloring.assignment, &mut rng);
            (distance(f, &candidate, config), it, candidate)
        })
        .min_by(|x, y| (x.0.value, x.1).cmp(&(y.0.value, y.1)))
        .expect("at least one iteration");

    Ok(ReductionResult {
        filter,
        distance: d,
        metric: config.metric,
        seed: Some(params.seed),
        iterations: params.iterations,
        best_iteration: Some(it),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::Metric;
    use crate::filter::fixtures::f_a;
    use crate::filter::language_subset;
    use crate::rational::Rational;

    #[test]
    fn singleton_votes_copy_the_filter() {
        let fa = f_a();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = vote_construct(&fa, &[0, 1], &mut rng);
        assert_eq!(g.len(), 2);
        assert_eq!(g.color(0), 0);
        assert_eq!(g.color(1), 1);
        assert_eq!(g.successor(0, "x"), Some(1));
        assert_eq!(g.successor(1, "x"), Some(0));
        assert_eq!(g.successor(0, "y"), Some(0));
    }

    #[test]
    fn one_group_gets_either_color() {
        let fa = f_a();
        let mut seen = BTreeSet::new();
        for seed in 0..32 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = vote_construct(&fa, &[0, 0], &mut rng);
            assert_eq!(g.len(), 1);
            assert_eq!(g.successor(0, "x"), Some(0));
            assert_eq!(g.successor(0, "y"), Some(0));
            assert!(language_subset(&fa, &g));
            seen.insert(g.color(0));
        }
        assert_eq!(seen, BTreeSet::from([0, 1]));
    }

    #[test]
    fn misrouted_votes_still_accept_every_string() {
        // s0 and s1 share a group and disagree on `a`; if s1 wins, the string
        // `a d` reaches the shared group, which needs a `d` edge added.
        let f = Filter::builder()
            .state("s0", 0)
            .state("s1", 0)
            .state("s2", 1)
            .edge("s0", "a", "s2")
            .edge("s1", "a", "s1")
            .edge("s0", "b", "s1")
            .edge("s2", "d", "s2")
            .build()
            .unwrap();
        let mut patched = 0;
        for seed in 0..32 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = vote_construct(&f, &[0, 0, 1], &mut rng);
            assert!(language_subset(&f, &g), "seed {seed}");
            assert!(g.in_language(&["a", "d"]));
            if g.successor(0, "d").is_some() {
                patched += 1;
            }
        }
        assert!(patched > 0);
    }

    #[test]
    fn fixture_global_picks_color_zero() {
        let fa = f_a();
        let params = GlobalParams {
            iterations: 16,
            seed: 5,
            ..GlobalParams::default()
        };
        let r = reduce_global(&fa, 1, &DistanceConfig::new(Metric::Hamming), &params).unwrap();
        assert_eq!(r.filter.len(), 1);
        assert_eq!(r.filter.color(0), 0);
        assert_eq!(r.distance.value, Rational::new(1, 2));
    }

    #[test]
    fn argument_checks() {
        let fa = f_a();
        let cfg = DistanceConfig::default();
        assert_eq!(
            reduce_global(&fa, 0, &cfg, &GlobalParams::default()).unwrap_err(),
            ReduceError::TargetSize
        );
        let none = GlobalParams {
            iterations: 0,
            ..GlobalParams::default()
        };
        assert_eq!(
            reduce_global(&fa, 1, &cfg, &none).unwrap_err(),
            ReduceError::Iterations
        );
        let r = reduce_global(&fa, 2, &cfg, &GlobalParams::default()).unwrap();
        assert_eq!(r.filter, fa);
        assert_eq!(r.distance.value, Rational::from_integer(0));
    }
}
