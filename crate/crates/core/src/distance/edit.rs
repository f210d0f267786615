//! Worst-case edit distance between runs of two filters.
//!
//! `d_e(q1, k1, q2, k2)` is indexed by how many more observations each filter
//! reads. Round `i` fills every cell with `max(k1, k2) = i`, sweeping
//! `j = 0..=i` over row `(i, j)` and column `(j, i)`, so the cells
//! `(k1-1, k2)`, `(k1, k2-1)` and `(k1-1, k2-1)` are always ready.
//!
//! Base cases (one side reads nothing) are closed forms: the idle side has a
//! single output, the busy side needs `k` insertions (or deletions), plus one
//! replacement when the busy side can walk `k` steps without ever showing the
//! idle side's color.
//!
//! An observation only counts for the adversary if both filters can still
//! read the rest of the string in lockstep after it, the same feasibility rule
//! the Hamming table uses. Insert and delete branches that lead nowhere are not
//! available to the editor.

use std::collections::HashMap;

use rayon::prelude::*;

use super::pairs::PairSpace;
use super::walk::{longest_walks, WalkLength};
use super::{ConvergenceParams, DistanceResult, NormalizedMax, Stop, PAR_MIN_LEN};
use crate::filter::{Color, Filter, StateIndex};
use crate::rational::Rational;
use crate::strings::EditCosts;

/// `None`: no pair of runs of the cell's lengths exists; reads as 0.
type Cell = Option<u64>;

/// All cells with `max(k1, k2) = i`.
#[derive(Debug, Clone)]
struct Round {
    i: usize,
    /// `rows[j][p]` = (i, j) for `j <= i`
    rows: Vec<Vec<Cell>>,
    /// `cols[j][p]` = (j, i) for `j < i`
    cols: Vec<Vec<Cell>>,
}

impl Round {
    fn empty(i: usize) -> Self {
        Self {
            i,
            rows: Vec::with_capacity(i + 1),
            cols: Vec::with_capacity(i),
        }
    }

    fn get(&self, k1: usize, k2: usize, p: usize) -> Cell {
        if k1 == self.i {
            self.rows[k2][p]
        } else {
            debug_assert_eq!(k2, self.i);
            self.cols[k1][p]
        }
    }

    fn diagonal(&self) -> &[Cell] {
        &self.rows[self.i]
    }
}

#[derive(Debug, Clone)]
pub struct EditTable {
    n2: usize,
    rounds: Vec<Round>,
    initial_pair: usize,
    initial_diagonal: Vec<u64>,
    best: Vec<NormalizedMax>,
    i_reached: usize,
    converged: bool,
}

impl EditTable {
    /// `d_e(q1, k1, q2, k2)`, or `None` when that round was not retained.
    pub fn get(&self, q1: StateIndex, k1: usize, q2: StateIndex, k2: usize) -> Option<u64> {
        let p = q1 * self.n2 + q2;
        let i = k1.max(k2);
        if p == self.initial_pair && k1 == k2 && i <= self.i_reached {
            return Some(self.initial_diagonal[i]);
        }
        let round = self.rounds.iter().find(|r| r.i == i)?;
        Some(round.get(k1, k2, p).unwrap_or(0))
    }

    pub fn i_reached(&self) -> usize {
        self.i_reached
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// `d_e(q0_1, i, q0_2, i)` for every computed round.
    pub fn initial_diagonal(&self) -> &[u64] {
        &self.initial_diagonal
    }

    /// `max_i d_e(q1, i, q2, i) / (i + 1)` over the computed rounds.
    pub fn normalized_max(&self, q1: StateIndex, q2: StateIndex) -> Rational {
        self.best[q1 * self.n2 + q2].value
    }

    pub fn distance(&self) -> DistanceResult {
        let best = self.best[self.initial_pair];
        DistanceResult {
            value: best.value,
            k_at_max: best.at,
            k_reached: self.i_reached,
            converged: self.converged,
        }
    }
}

/// Runs rounds until every pair's normalized diagonal value moves by at most
/// `params.epsilon`, or `params.k_max` is hit. Keeps the last two rounds.
pub fn edit_table(
    f1: &Filter,
    f2: &Filter,
    costs: EditCosts,
    params: &ConvergenceParams,
) -> EditTable {
    build(f1, f2, costs, Stop::Converge(*params), false)
}

/// Runs rounds `0..=depth` and keeps all of them.
pub fn edit_table_to_depth(f1: &Filter, f2: &Filter, costs: EditCosts, depth: usize) -> EditTable {
    build(f1, f2, costs, Stop::Depth(depth), true)
}

/// Per-state walk lengths of one filter, against the colors of the other.
struct Walks {
    any: Vec<WalkLength>,
    avoiding: HashMap<Color, Vec<WalkLength>>,
}

impl Walks {
    fn new(f: &Filter, other: &Filter) -> Self {
        let mut avoiding = HashMap::new();
        for q in 0..other.len() {
            avoiding
                .entry(other.color(q))
                .or_insert_with_key(|&c| longest_walks(f, Some(c)));
        }
        Self {
            any: longest_walks(f, None),
            avoiding,
        }
    }

    /// Worst-case cost for an idle side showing `idle_color` against `k`
    /// further observations from `q`.
    fn one_sided(&self, q: StateIndex, idle_color: Color, k: usize, per_step: u64, costs: EditCosts) -> Cell {
        let k64 = k as u64;
        if !self.any[q].exceeds(k64) {
            return None;
        }
        let extra = if self.avoiding[&idle_color][q].exceeds(k64) {
            costs.replace()
        } else {
            0
        };
        Some(k64 * per_step + extra)
    }
}

struct Recurrence<'a> {
    f1: &'a Filter,
    f2: &'a Filter,
    space: PairSpace,
    costs: EditCosts,
    walks1: Walks,
    walks2: Walks,
}

impl Recurrence<'_> {
    fn cell(&self, k1: usize, k2: usize, p: usize, lookup: impl Fn(usize, usize, usize) -> Cell) -> Cell {
        let (q1, q2) = self.space.split(p);
        let costs = self.costs;
        match (k1, k2) {
            (0, 0) => Some(if self.space.same_color[p] {
                0
            } else {
                costs.replace()
            }),
            (0, _) => self
                .walks2
                .one_sided(q2, self.f1.color(q1), k2, costs.insert, costs),
            (_, 0) => self
                .walks1
                .one_sided(q1, self.f2.color(q2), k1, costs.delete, costs),
            _ => self.space.steps[p]
                .iter()
                .filter_map(|s| {
                    let both = lookup(k1 - 1, k2 - 1, s.both)?;
                    if self.space.same_color[p] {
                        return Some(both);
                    }
                    [
                        lookup(k1, k2 - 1, s.second).map(|v| v + costs.insert),
                        lookup(k1 - 1, k2, s.first).map(|v| v + costs.delete),
                        Some(both + costs.substitute),
                    ]
                    .into_iter()
                    .flatten()
                    .min()
                })
                .max(),
        }
    }

    fn round(&self, i: usize, prev: Option<&Round>) -> Round {
        let mut round = Round::empty(i);
        let pairs = self.space.len();
        for j in 0..=i {
            let row: Vec<Cell> = {
                let current = &round;
                let lookup = |a: usize, b: usize, p: usize| {
                    if a.max(b) == i {
                        current.get(a, b, p)
                    } else {
                        prev.expect("earlier round").get(a, b, p)
                    }
                };
                (0..pairs)
                    .into_par_iter()
                    .with_min_len(PAR_MIN_LEN)
                    .map(|p| self.cell(i, j, p, lookup))
                    .collect()
            };
            round.rows.push(row);
            if j < i {
                let col: Vec<Cell> = {
                    let current = &round;
                    let lookup = |a: usize, b: usize, p: usize| {
                        if a.max(b) == i {
                            current.get(a, b, p)
                        } else {
                            prev.expect("earlier round").get(a, b, p)
                        }
                    };
                    (0..pairs)
                        .into_par_iter()
                        .with_min_len(PAR_MIN_LEN)
                        .map(|p| self.cell(j, i, p, lookup))
                        .collect()
                };
                round.cols.push(col);
            }
        }
        round
    }
}

fn build(f1: &Filter, f2: &Filter, costs: EditCosts, stop: Stop, keep_all: bool) -> EditTable {
    let space = PairSpace::new(f1, f2);
    let initial_pair = space.index(f1.initial(), f2.initial());
    let n2 = space.n2;
    let epsilon = stop.epsilon();
    let rec = Recurrence {
        f1,
        f2,
        space,
        costs,
        walks1: Walks::new(f1, f2),
        walks2: Walks::new(f2, f1),
    };

    let mut current = rec.round(0, None);
    let mut best: Vec<NormalizedMax> = current
        .diagonal()
        .iter()
        .map(|v| NormalizedMax::first(v.unwrap_or(0)))
        .collect();
    let mut initial_diagonal = vec![current.diagonal()[initial_pair].unwrap_or(0)];
    let mut retained: Vec<Round> = Vec::new();
    let mut previous: Option<Round> = None;

    let mut i = 0;
    let mut converged = false;
    while !stop.reached(i, converged) {
        i += 1;
        let next = rec.round(i, Some(&current));
        converged = super::within_epsilon(
            current.diagonal().iter().map(|v| v.unwrap_or(0)),
            next.diagonal().iter().map(|v| v.unwrap_or(0)),
            i,
            &epsilon,
        );
        for (b, v) in best.iter_mut().zip(next.diagonal()) {
            b.update(v.unwrap_or(0), i);
        }
        initial_diagonal.push(next.diagonal()[initial_pair].unwrap_or(0));
        let done = std::mem::replace(&mut current, next);
        if keep_all {
            retained.push(done);
        } else {
            previous = Some(done);
        }
    }
    retained.extend(previous);
    retained.push(current);

    EditTable {
        n2,
        rounds: retained,
        initial_pair,
        initial_diagonal,
        best,
        i_reached: i,
        converged,
    }
}
