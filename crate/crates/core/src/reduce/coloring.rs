//! Threshold improper coloring of the state dissimilarity graph.
//!
//! The goal is an assignment of at most `k` colors that minimizes the largest
//! total weight any vertex shares with its own color class. Search runs on
//! `f64` weights; the reported objective is recomputed exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::{self_weight_matrix, DistanceConfig};
use crate::filter::Filter;
use crate::rational::{to_f64, Rational};

/// One vertex per filter state, in state order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedCompleteGraph {
    pub ids: Vec<String>,
    pub weights: Vec<Vec<Rational>>,
}

impl WeightedCompleteGraph {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

pub fn build_complete_graph(f: &Filter, config: &DistanceConfig) -> WeightedCompleteGraph {
    WeightedCompleteGraph {
        ids: f.states().iter().map(|s| s.id().to_string()).collect(),
        weights: self_weight_matrix(f, config),
    }
}

/// Largest same-color weight sum over all vertices.
pub fn objective(g: &WeightedCompleteGraph, assignment: &[usize]) -> BigRational {
    let big = |r: &Rational| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    (0..g.len())
        .map(|v| {
            (0..g.len())
                .filter(|&u| u != v && assignment[u] == assignment[v])
                .fold(BigRational::zero(), |acc, u| acc + big(&g.weights[v][u]))
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringParams {
    pub restarts: usize,
    /// Move budget per restart.
    pub local_moves: usize,
    pub seed: u64,
}

impl Default for ColoringParams {
    fn default() -> Self {
        Self {
            restarts: 20,
            local_moves: 5000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    /// Color in `0..k` per vertex.
    pub assignment: Vec<usize>,
    pub objective: BigRational,
}

/// Multi-start local search. Each restart builds a greedy coloring (heaviest
/// vertices first, each into its cheapest class), then keeps moving vertices
/// out of the worst vertex's class while that helps, allowing a limited
/// number of sideways moves. Restart 0 breaks ties by vertex order, later
/// restarts break them at random.
pub fn improper_coloring(g: &WeightedCompleteGraph, k: usize, params: &ColoringParams) -> Coloring {
    assert!(k >= 1, "k must be at least 1");
    let n = g.len();
    if k >= n {
        return Coloring {
            assignment: (0..n).collect(),
            objective: BigRational::zero(),
        };
    }
    let w: Vec<Vec<f64>> = g
        .weights
        .iter()
        .map(|row| row.iter().map(to_f64).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(0);

    let mut best: Option<Coloring> = None;
    for restart in 0..params.restarts.max(1) {
        let rng = (restart > 0).then_some(&mut rng);
        let (seed, polished) = search(&w, k, params.local_moves, rng);
        let seed_obj = objective(g, &seed);
        let polished_obj = objective(g, &polished);
        let candidate = if polished_obj <= seed_obj {
            Coloring {
                assignment: polished,
                objective: polished_obj,
            }
        } else {
            Coloring {
                assignment: seed,
                objective: seed_obj,
            }
        };
        if best.as_ref().is_none_or(|b| candidate.objective < b.objective) {
            best = Some(candidate);
        }
    }
    best.expect("at least one restart")
}

/// Returns the greedy seed and the locally improved coloring.
fn search(
    w: &[Vec<f64>],
    k: usize,
    budget: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> (Vec<usize>, Vec<usize>) {
    let n = w.len();
    let total: Vec<f64> = w.iter().map(|row| row.iter().sum()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    if let Some(r) = rng.as_deref_mut() {
        order.shuffle(r);
    }
    // Stable: equal totals keep the (possibly shuffled) order.
    order.sort_by(|&a, &b| total[b].total_cmp(&total[a]));

    let mut color = vec![usize::MAX; n];
    for &v in &order {
        let cost = |c: usize| -> f64 { (0..n).filter(|&u| color[u] == c).map(|u| w[v][u]).sum() };
        let costs: Vec<f64> = (0..k).map(cost).collect();
        let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let ties: Vec<usize> = (0..k).filter(|&c| same(costs[c], min)).collect();
        color[v] = match rng.as_deref_mut() {
            Some(r) => ties[r.gen_range(0..ties.len())],
            None => ties[0],
        };
    }
    let seed = color.clone();

    let mut load: Vec<f64> = (0..n)
        .map(|v| (0..n).filter(|&u| u != v && color[u] == color[v]).map(|u| w[v][u]).sum())
        .collect();
    let mut plateau = budget / 10;
    for _ in 0..budget {
        let current = score(&load);
        let worst = (0..n)
            .max_by(|&a, &b| load[a].total_cmp(&load[b]).then(b.cmp(&a)))
            .expect("non-empty");
        let mut improving: Option<((f64, f64), usize, usize)> = None;
        let mut sideways: Vec<(usize, usize)> = Vec::new();
        for u in (0..n).filter(|&u| color[u] == color[worst]) {
            for c in (0..k).filter(|&c| c != color[u]) {
                let s = score(&moved_loads(w, &color, &load, u, c));
                if better(s, current) {
                    if improving.is_none_or(|(b, _, _)| better(s, b)) {
                        improving = Some((s, u, c));
                    }
                } else if !better(current, s) {
                    sideways.push((u, c));
                }
            }
        }
        let (u, c) = match (improving, rng.as_deref_mut()) {
            (Some((_, u, c)), _) => (u, c),
            (None, Some(r)) if plateau > 0 && !sideways.is_empty() => {
                plateau -= 1;
                sideways[r.gen_range(0..sideways.len())]
            }
            (None, None) if plateau > 0 && !sideways.is_empty() => {
                plateau -= 1;
                sideways[0]
            }
            _ => break,
        };
        load = moved_loads(w, &color, &load, u, c);
        color[u] = c;
    }
    (seed, color)
}

fn moved_loads(w: &[Vec<f64>], color: &[usize], load: &[f64], u: usize, c: usize) -> Vec<f64> {
    let from = color[u];
    let mut next = load.to_vec();
    next[u] = 0.0;
    for x in (0..w.len()).filter(|&x| x != u) {
        if color[x] == from {
            next[x] -= w[u][x];
        } else if color[x] == c {
            next[x] += w[u][x];
            next[u] += w[u][x];
        }
    }
    next
}

/// (worst load, total load); compared lexicographically.
fn score(load: &[f64]) -> (f64, f64) {
    (
        load.iter().copied().fold(0.0, f64::max),
        load.iter().sum(),
    )
}

const TOLERANCE: f64 = 1e-9;

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE * (1.0 + a.abs().max(b.abs()))
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    if !same(a.0, b.0) {
        return a.0 < b.0;
    }
    !same(a.1, b.1) && a.1 < b.1
}
