//! Worst-case, length-normalized distances between filters.
//!
//! Both metrics are computed by iterating a table over state pairs and string
//! lengths until the normalized per-pair values stop moving by more than
//! `epsilon`. The reported distance is the largest normalized value seen at
//! the pair of initial states. It is a true bound only when the first filter's
//! language is contained in the second's (see [`crate::filter::language_subset`]);
//! otherwise the tables still run but compare strings only one side accepts.

mod edit;
mod hamming;
mod pairs;
mod walk;

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use thiserror::Error;

pub use edit::{edit_table, edit_table_to_depth, EditTable};
pub use hamming::{hamming_table, hamming_table_to_depth, HammingTable};
pub use walk::{longest_color_avoiding, WalkLength};

use crate::filter::Filter;
use crate::rational::Rational;
use crate::strings::EditCosts;

pub(crate) const PAR_MIN_LEN: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    #[default]
    Hamming,
    Edit,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Hamming => "hamming",
            Metric::Edit => "edit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric `{0}` (expected hamming or edit)")]
pub struct ParseMetricError(String);

impl FromStr for Metric {
    type Err = ParseMetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" | "h" => Ok(Metric::Hamming),
            "edit" | "e" => Ok(Metric::Edit),
            _ => Err(ParseMetricError(s.to_string())),
        }
    }
}

/// Stopping rule for the distance tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceParams {
    pub epsilon: Rational,
    pub k_max: usize,
}

impl Default for ConvergenceParams {
    fn default() -> Self {
        Self {
            epsilon: Rational::new(7, 200),
            k_max: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidParams {
    #[error("epsilon must be positive")]
    Epsilon,
    #[error("k_max must be at least 2")]
    KMax,
}

impl ConvergenceParams {
    pub fn new(epsilon: Rational, k_max: usize) -> Result<Self, InvalidParams> {
        if !epsilon.is_positive() {
            return Err(InvalidParams::Epsilon);
        }
        if k_max < 2 {
            return Err(InvalidParams::KMax);
        }
        Ok(Self { epsilon, k_max })
    }
}

/// Metric plus everything needed to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DistanceConfig {
    pub metric: Metric,
    pub costs: EditCosts,
    pub params: ConvergenceParams,
}

impl DistanceConfig {
    pub fn new(metric: Metric) -> Self {
        Self {
            metric,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: Rational,
    /// String length at which `value` was first attained.
    pub k_at_max: usize,
    /// Largest string length the table reached.
    pub k_reached: usize,
    pub converged: bool,
}

pub fn distance_hamming(f1: &Filter, f2: &Filter, params: &ConvergenceParams) -> DistanceResult {
    hamming_table(f1, f2, params).distance()
}

pub fn distance_edit(
    f1: &Filter,
    f2: &Filter,
    costs: EditCosts,
    params: &ConvergenceParams,
) -> DistanceResult {
    edit_table(f1, f2, costs, params).distance()
}

pub fn distance(f1: &Filter, f2: &Filter, config: &DistanceConfig) -> DistanceResult {
    match config.metric {
        Metric::Hamming => distance_hamming(f1, f2, &config.params),
        Metric::Edit => distance_edit(f1, f2, config.costs, &config.params),
    }
}

/// Pairwise dissimilarity of the states of `f`, from the table of `f`
/// against itself. Symmetric with a zero diagonal.
pub fn self_weight_matrix(f: &Filter, config: &DistanceConfig) -> Vec<Vec<Rational>> {
    let n = f.len();
    let raw: Box<dyn Fn(usize, usize) -> Rational> = match config.metric {
        Metric::Hamming => {
            let t = hamming_table(f, f, &config.params);
            Box::new(move |a, b| t.normalized_max(a, b))
        }
        Metric::Edit => {
            let t = edit_table(f, f, config.costs, &config.params);
            Box::new(move |a, b| t.normalized_max(a, b))
        }
    };
    let mut w = vec![vec![Rational::from_integer(0); n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let v = raw(a, b).max(raw(b, a));
            w[a][b] = v;
            w[b][a] = v;
        }
    }
    w
}

/// Running `max_i d(i) / (i + 1)`, remembering the first maximizing `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct NormalizedMax {
    pub value: Rational,
    pub at: usize,
}

impl NormalizedMax {
    pub fn first(d0: u64) -> Self {
        Self {
            value: Rational::from_integer(to_i64(d0)),
            at: 0,
        }
    }

    pub fn update(&mut self, d: u64, i: usize) {
        let v = Rational::new(to_i64(d), to_i64(i as u64 + 1));
        if v > self.value {
            self.value = v;
            self.at = i;
        }
    }
}

fn to_i64(v: u64) -> i64 {
    i64::try_from(v).expect("distance value fits in i64")
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Stop {
    Converge(ConvergenceParams),
    Depth(usize),
}

impl Stop {
    fn epsilon(&self) -> Rational {
        match self {
            Stop::Converge(p) => p.epsilon,
            Stop::Depth(_) => ConvergenceParams::default().epsilon,
        }
    }

    fn reached(&self, k: usize, converged: bool) -> bool {
        match *self {
            Stop::Converge(p) => converged || k >= p.k_max,
            Stop::Depth(d) => k >= d,
        }
    }
}

/// `|cur/(k+1) - prev/k| <= epsilon` for every pair (`k >= 1`).
fn within_epsilon(
    prev: impl Iterator<Item = u64>,
    cur: impl Iterator<Item = u64>,
    k: usize,
    epsilon: &Rational,
) -> bool {
    let k = to_i64(k as u64);
    prev.zip(cur).all(|(a, b)| {
        let diff = Rational::new(to_i64(b), k + 1) - Rational::new(to_i64(a), k);
        diff.abs() <= *epsilon
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::fixtures::{f_a, f_b};

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn self_distance_is_zero() {
        let p = ConvergenceParams::default();
        for f in [f_a(), f_b()] {
            assert_eq!(distance_hamming(&f, &f, &p).value, Rational::from_integer(0));
            assert_eq!(
                distance_edit(&f, &f, EditCosts::UNIT, &p).value,
                Rational::from_integer(0)
            );
        }
    }

    #[test]
    fn fixture_hamming_distance_is_one_half() {
        let r = distance_hamming(&f_a(), &f_b(), &ConvergenceParams::default());
        assert_eq!(r.value, half());
        assert_eq!(r.k_at_max, 1);
        assert!(r.converged);
    }

    #[test]
    fn disjoint_labels_and_different_colors_give_one() {
        let f1 = Filter::builder()
            .state("p", 0)
            .edge("p", "a", "p")
            .build()
            .unwrap();
        let f2 = Filter::builder()
            .state("r", 1)
            .edge("r", "b", "r")
            .build()
            .unwrap();
        let r = distance_hamming(&f1, &f2, &ConvergenceParams::default());
        assert_eq!(r.value, Rational::from_integer(1));
        assert_eq!(r.k_at_max, 0);
        let same = Filter::builder()
            .state("r", 0)
            .edge("r", "b", "r")
            .build()
            .unwrap();
        let e = distance_edit(&f1, &same, EditCosts::UNIT, &ConvergenceParams::default());
        assert_eq!(e.value, Rational::from_integer(0));
    }

    #[test]
    fn edit_is_more_forgiving_on_fixture() {
        let p = ConvergenceParams::default();
        let h = distance_hamming(&f_a(), &f_b(), &p).value;
        let e = distance_edit(&f_a(), &f_b(), EditCosts::UNIT, &p).value;
        assert!(e <= h, "edit {e} > hamming {h}");
    }

    #[test]
    fn edit_fixture_cells() {
        let (fa, fb) = (f_a(), f_b());
        let t = edit_table_to_depth(&fa, &fb, EditCosts::UNIT, 3);
        assert_eq!(t.get(0, 0, 0, 0), Some(0));
        assert_eq!(t.get(1, 0, 0, 0), Some(1));
        // L(S, 0) = -1: no replacement needed, just two insertions.
        assert_eq!(t.get(0, 0, 0, 2), Some(2));
        assert_eq!(t.get(0, 2, 0, 2), Some(1));
    }

    #[test]
    fn weight_matrix_fixtures() {
        let cfg = DistanceConfig::default();
        let w = self_weight_matrix(&f_a(), &cfg);
        assert_eq!(w[0][0], Rational::from_integer(0));
        assert_eq!(w[1][1], Rational::from_integer(0));
        assert_eq!(w[0][1], Rational::from_integer(1));
        assert_eq!(w[1][0], Rational::from_integer(1));
        assert_eq!(
            self_weight_matrix(&f_b(), &cfg),
            vec![vec![Rational::from_integer(0)]]
        );
    }

    #[test]
    fn params_validation() {
        assert!(ConvergenceParams::new(Rational::from_integer(0), 10).is_err());
        assert!(ConvergenceParams::new(Rational::new(1, 10), 1).is_err());
        assert!(ConvergenceParams::new(Rational::new(1, 10), 2).is_ok());
    }

    #[test]
    fn k_max_cap_reports_not_converged() {
        let params = ConvergenceParams::new(Rational::new(1, 1_000_000), 3).unwrap();
        let r = distance_hamming(&f_a(), &f_b(), &params);
        assert!(!r.converged);
        assert_eq!(r.k_reached, 3);
        let r = distance_edit(&f_a(), &f_b(), EditCosts::UNIT, &params);
        assert!(!r.converged);
        assert_eq!(r.k_reached, 3);
    }
}
