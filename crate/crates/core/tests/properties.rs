mod common;

use combfilter::distance::{
    distance_edit, distance_hamming, hamming_table_to_depth, self_weight_matrix, ConvergenceParams,
    DistanceConfig, Metric,
};
use combfilter::filter::{language_subset, Filter};
use combfilter::reduce::{
    build_complete_graph, improper_coloring, merge, objective, vote_construct, ColoringParams,
};
use combfilter::{EditCosts, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn filter_from(seed: u64, max_states: usize, max_labels: usize) -> Filter {
    common::random_filter(&mut ChaCha8Rng::seed_from_u64(seed), max_states, max_labels)
}

/// Strings over `labels` up to `max_len`, depth first.
fn all_strings(labels: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::<String>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for y in labels {
                let mut t = s.clone();
                t.push(y.to_string());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Whether some string of length <= `max_len` is accepted by `f1` but not `f2`,
/// by walking every string `f1` accepts.
fn counterexample_by_enumeration(f1: &Filter, f2: &Filter, max_len: usize) -> bool {
    fn go(f1: &Filter, f2: &Filter, q1: usize, q2: usize, left: usize) -> bool {
        if left == 0 {
            return false;
        }
        f1.state(q1).edges().iter().any(|(y, &t1)| match f2.successor(q2, y) {
            None => true,
            Some(t2) => go(f1, f2, t1, t2, left - 1),
        })
    }
    go(f1, f2, f1.initial(), f2.initial(), max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_are_prefix_closed(seed in any::<u64>()) {
        let f = filter_from(seed, 5, 3);
        for s in all_strings(&common::LABELS, 4) {
            match f.run(&s) {
                Ok(colors) => {
                    prop_assert_eq!(colors.len(), s.len() + 1);
                    for cut in 0..s.len() {
                        prop_assert!(f.in_language(&s[..cut]));
                    }
                }
                Err(e) => {
                    prop_assert!(e.index < s.len());
                    prop_assert!(!f.in_language(&s[..=e.index]));
                    prop_assert!(f.in_language(&s[..e.index]));
                }
            }
        }
    }

    #[test]
    fn language_subset_matches_enumeration_small(a in any::<u64>(), b in any::<u64>()) {
        let (f1, f2) = (filter_from(a, 3, 2), filter_from(b, 3, 2));
        let bound = 2 * f1.len() * f2.len();
        prop_assert_eq!(language_subset(&f1, &f2), !counterexample_by_enumeration(&f1, &f2, bound));
    }

    #[test]
    fn language_subset_is_consistent_with_bounded_enumeration(a in any::<u64>(), b in any::<u64>()) {
        let (f1, f2) = (filter_from(a, 5, 3), filter_from(b, 5, 3));
        if counterexample_by_enumeration(&f1, &f2, 7) {
            prop_assert!(!language_subset(&f1, &f2));
        }
        prop_assert!(language_subset(&f1, &f1));
    }

    #[test]
    fn hamming_values_are_bounded(a in any::<u64>(), b in any::<u64>()) {
        let (f1, f2) = (filter_from(a, 6, 3), filter_from(b, 6, 3));
        let t = hamming_table_to_depth(&f1, &f2, 6);
        for q1 in 0..f1.len() {
            for q2 in 0..f2.len() {
                prop_assert!(t.get(q1, q2, 0).unwrap() <= 1);
                for k in 0..=6 {
                    prop_assert!(t.get(q1, q2, k).unwrap() <= k as u64 + 1);
                }
            }
        }
        let d = distance_hamming(&f1, &f2, &ConvergenceParams::default()).value;
        prop_assert!(d >= Rational::from_integer(0) && d <= Rational::from_integer(1));
    }

    #[test]
    fn edit_role_swap_symmetry(a in any::<u64>(), b in any::<u64>(), ins in 1u64..4, del in 1u64..4, sub in 1u64..6) {
        let (f1, f2) = (filter_from(a, 5, 3), filter_from(b, 5, 3));
        let costs = EditCosts::new(ins, del, sub);
        let p = ConvergenceParams::default();
        prop_assert_eq!(
            distance_edit(&f1, &f2, costs, &p).value,
            distance_edit(&f2, &f1, costs.swapped(), &p).value
        );
    }

    #[test]
    fn unit_edit_never_exceeds_hamming(a in any::<u64>(), b in any::<u64>()) {
        let (f1, f2) = (filter_from(a, 6, 3), filter_from(b, 6, 3));
        let p = ConvergenceParams::default();
        prop_assert!(distance_edit(&f1, &f2, EditCosts::UNIT, &p).value <= distance_hamming(&f1, &f2, &p).value);
    }

    #[test]
    fn weight_matrix_is_symmetric(seed in any::<u64>(), edit in any::<bool>()) {
        let f = filter_from(seed, 6, 3);
        let metric = if edit { Metric::Edit } else { Metric::Hamming };
        let w = self_weight_matrix(&f, &DistanceConfig::new(metric));
        for (a, row) in w.iter().enumerate() {
            prop_assert_eq!(row[a], Rational::from_integer(0));
            for (b, v) in row.iter().enumerate() {
                prop_assert_eq!(*v, w[b][a]);
                prop_assert!(*v >= Rational::from_integer(0));
            }
        }
    }

    #[test]
    fn merges_keep_the_language(seed in any::<u64>(), i in any::<usize>(), j in any::<usize>()) {
        let f = filter_from(seed, 6, 3);
        prop_assume!(f.len() >= 2);
        let a = i % f.len();
        let b = (a + 1 + j % (f.len() - 1)) % f.len();
        let out = merge(&f, f.state(a).id(), f.state(b).id()).unwrap();
        prop_assert_eq!(out.filter.len(), f.len() - 1);
        prop_assert!(out.filter.validate().is_ok());
        prop_assert!(language_subset(&f, &out.filter));
        prop_assert_eq!(out.filter.color(out.filter.index_of(&out.merged_id).unwrap()), f.color(a));
    }

    #[test]
    fn votes_keep_the_language(seed in any::<u64>(), k in 1usize..5) {
        let f = filter_from(seed, 6, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let assignment: Vec<usize> = (0..f.len()).map(|_| rng.gen_range(0..k)).collect();
        let g = vote_construct(&f, &assignment, &mut rng);
        prop_assert!(g.len() <= k);
        prop_assert!(g.validate().is_ok());
        prop_assert!(language_subset(&f, &g));
    }

    #[test]
    fn coloring_objective_contracts(seed in any::<u64>(), k in 1usize..5) {
        let f = filter_from(seed, 6, 3);
        let g = build_complete_graph(&f, &DistanceConfig::default());
        let c = improper_coloring(&g, k, &ColoringParams { restarts: 4, local_moves: 200, seed });
        prop_assert!(c.assignment.iter().all(|&x| x < k));
        prop_assert_eq!(&c.objective, &objective(&g, &c.assignment));
        prop_assert!(c.objective <= objective(&g, &vec![0; g.len()]));
        if k >= g.len() {
            prop_assert_eq!(c.objective, objective(&g, &(0..g.len()).collect::<Vec<_>>()));
        }
    }
}
