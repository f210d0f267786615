//! Worst-case Hamming distance between runs of two filters.
//!
//! `d_h(q1, q2, k)` is the largest number of mismatched outputs over strings
//! of length `k` that both filters can process from `(q1, q2)`. Layer `k` is
//! computed from layer `k - 1`: the current pair contributes its own mismatch
//! and the adversary picks the shared label whose successor pair is worst.

use rayon::prelude::*;

use super::pairs::PairSpace;
use super::{ConvergenceParams, DistanceResult, NormalizedMax, Stop, PAR_MIN_LEN};
use crate::filter::{Filter, StateIndex};
use crate::rational::Rational;

/// `None` marks a pair from which no string of the layer's length can be
/// processed by both filters; it reads as 0.
type Layer = Vec<Option<u64>>;

#[derive(Debug, Clone)]
pub struct HammingTable {
    n2: usize,
    first_retained: usize,
    layers: Vec<Layer>,
    initial_pair: usize,
    initial_values: Vec<u64>,
    best: Vec<NormalizedMax>,
    k_reached: usize,
    converged: bool,
}

impl HammingTable {
    /// `d_h(q1, q2, k)`, or `None` when layer `k` was not retained.
    pub fn get(&self, q1: StateIndex, q2: StateIndex, k: usize) -> Option<u64> {
        let p = q1 * self.n2 + q2;
        if p == self.initial_pair && k <= self.k_reached {
            return Some(self.initial_values[k]);
        }
        let layer = self.layers.get(k.checked_sub(self.first_retained)?)?;
        Some(layer[p].unwrap_or(0))
    }

    /// Whether both filters can process some string of length `k` from the pair.
    pub fn feasible(&self, q1: StateIndex, q2: StateIndex, k: usize) -> Option<bool> {
        let layer = self.layers.get(k.checked_sub(self.first_retained)?)?;
        Some(layer[q1 * self.n2 + q2].is_some())
    }

    pub fn k_reached(&self) -> usize {
        self.k_reached
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// `d_h` at the initial pair for every computed length.
    pub fn initial_values(&self) -> &[u64] {
        &self.initial_values
    }

    /// `max_i d_h(q1, q2, i) / (i + 1)` over the computed lengths.
    pub fn normalized_max(&self, q1: StateIndex, q2: StateIndex) -> Rational {
        self.best[q1 * self.n2 + q2].value
    }

    pub fn distance(&self) -> DistanceResult {
        let best = self.best[self.initial_pair];
        DistanceResult {
            value: best.value,
            k_at_max: best.at,
            k_reached: self.k_reached,
            converged: self.converged,
        }
    }
}

/// Fills layers until every pair's normalized value moves by at most
/// `params.epsilon` between consecutive lengths, or `params.k_max` is hit.
/// Only the last two layers (and the initial pair's history) are kept.
pub fn hamming_table(f1: &Filter, f2: &Filter, params: &ConvergenceParams) -> HammingTable {
    build(f1, f2, Stop::Converge(*params), false)
}

/// Fills exactly `depth + 1` layers and keeps all of them.
pub fn hamming_table_to_depth(f1: &Filter, f2: &Filter, depth: usize) -> HammingTable {
    build(f1, f2, Stop::Depth(depth), true)
}

fn build(f1: &Filter, f2: &Filter, stop: Stop, keep_all: bool) -> HammingTable {
    let space = PairSpace::new(f1, f2);
    let initial_pair = space.index(f1.initial(), f2.initial());
    let epsilon = stop.epsilon();

    let mismatch: Vec<u64> = space.same_color.iter().map(|&eq| u64::from(!eq)).collect();
    let mut current: Layer = mismatch.iter().map(|&m| Some(m)).collect();
    let mut best: Vec<NormalizedMax> = current
        .iter()
        .map(|v| NormalizedMax::first(v.unwrap_or(0)))
        .collect();
    let mut initial_values = vec![current[initial_pair].unwrap_or(0)];
    let mut layers = vec![current.clone()];
    let mut first_retained = 0;

    let mut k = 0;
    let mut converged = false;
    while !stop.reached(k, converged) {
        k += 1;
        let next: Layer = (0..space.len())
            .into_par_iter()
            .with_min_len(PAR_MIN_LEN)
            .map(|p| {
                space.steps[p]
                    .iter()
                    .filter_map(|s| current[s.both])
                    .max()
                    .map(|rest| mismatch[p] + rest)
            })
            .collect();

        converged = super::within_epsilon(
            current.iter().map(|v| v.unwrap_or(0)),
            next.iter().map(|v| v.unwrap_or(0)),
            k,
            &epsilon,
        );
        for (b, v) in best.iter_mut().zip(&next) {
            b.update(v.unwrap_or(0), k);
        }
        initial_values.push(next[initial_pair].unwrap_or(0));

        layers.push(next.clone());
        if !keep_all && layers.len() > 2 {
            layers.remove(0);
            first_retained += 1;
        }
        current = next;
    }

    HammingTable {
        n2: space.n2,
        first_retained,
        layers,
        initial_pair,
        initial_values,
        best,
        k_reached: k,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::fixtures::{f_a, f_b};

    #[test]
    fn identical_filter_same_state_is_zero() {
        let fa = f_a();
        let t = hamming_table_to_depth(&fa, &fa, 8);
        for k in 0..=8 {
            assert_eq!(t.get(0, 0, k), Some(0));
        }
    }

    #[test]
    fn fixture_values_against_hand_trace() {
        let (fa, fb) = (f_a(), f_b());
        let t = hamming_table_to_depth(&fa, &fb, 3);
        assert_eq!(t.get(0, 0, 0), Some(0));
        assert_eq!(t.get(1, 0, 0), Some(1));
        assert_eq!(t.get(0, 0, 1), Some(1));
        let t = hamming_table_to_depth(&fa, &fa, 3);
        assert_eq!(t.get(0, 1, 2), Some(3));
    }

    #[test]
    fn dead_end_continuations_do_not_count() {
        // Both filters can read `a` once, then nothing is shared: no string of
        // length 2 exists, so d_h(., 2) = 0 even though the colors differ.
        let f1 = Filter::builder()
            .state("p", 0)
            .state("p1", 0)
            .edge("p", "a", "p1")
            .build()
            .unwrap();
        let f2 = Filter::builder()
            .state("r", 1)
            .state("r1", 1)
            .edge("r", "a", "r1")
            .build()
            .unwrap();
        let t = hamming_table_to_depth(&f1, &f2, 2);
        assert_eq!(t.get(0, 0, 1), Some(2));
        assert_eq!(t.get(0, 0, 2), Some(0));
        assert_eq!(t.feasible(0, 0, 2), Some(false));
    }

    #[test]
    fn compact_table_keeps_two_layers() {
        let (fa, fb) = (f_a(), f_b());
        let t = hamming_table(&fa, &fb, &ConvergenceParams::default());
        assert!(t.converged());
        let k = t.k_reached();
        assert!(t.get(1, 0, k).is_some());
        assert!(t.get(1, 0, k - 1).is_some());
        assert!(k < 2 || t.get(1, 0, k - 2).is_none());
        // The initial pair keeps its full history.
        assert_eq!(t.initial_values().len(), k + 1);
        assert_eq!(t.get(0, 0, 0), Some(0));
    }
}
