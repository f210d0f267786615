//! Longest walks that avoid one output color.
//!
//! Walks need not be simple, so any cycle inside the allowed subgraph makes
//! the length unbounded; otherwise the allowed subgraph reachable from the
//! start is acyclic and a longest-path pass over it gives the answer.

use std::fmt;

use crate::filter::{Color, Filter, StateIndex};

/// Number of states on the longest walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkLength {
    /// The start state itself has the forbidden color.
    Blocked,
    Finite(u64),
    Unbounded,
}

impl WalkLength {
    /// Whether some walk visits more than `k` states, i.e. survives `k`
    /// transitions.
    pub fn exceeds(self, k: u64) -> bool {
        match self {
            WalkLength::Blocked => false,
            WalkLength::Finite(n) => n > k,
            WalkLength::Unbounded => true,
        }
    }

    /// `-1` for blocked, `None` for unbounded.
    pub fn as_signed(self) -> Option<i64> {
        match self {
            WalkLength::Blocked => Some(-1),
            WalkLength::Finite(n) => Some(n as i64),
            WalkLength::Unbounded => None,
        }
    }
}

impl fmt::Display for WalkLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkLength::Blocked => write!(f, "-1"),
            WalkLength::Finite(n) => write!(f, "{n}"),
            WalkLength::Unbounded => write!(f, "inf"),
        }
    }
}

/// Longest walk from `q` through states whose color is not `color`.
pub fn longest_color_avoiding(f: &Filter, q: StateIndex, color: Color) -> WalkLength {
    longest_walks(f, Some(color))[q]
}

/// Longest walk from every state, optionally avoiding a color.
pub(crate) fn longest_walks(f: &Filter, avoid: Option<Color>) -> Vec<WalkLength> {
    let n = f.len();
    let allowed: Vec<bool> = (0..n).map(|q| avoid != Some(f.color(q))).collect();
    let succ: Vec<Vec<StateIndex>> = (0..n)
        .map(|q| {
            f.state(q)
                .edges()
                .values()
                .copied()
                .filter(|&t| allowed[t])
                .collect()
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    let mut result = vec![WalkLength::Blocked; n];
    // Per open state: next successor to look at, and whether it closes a cycle.
    let mut stack: Vec<(StateIndex, usize, bool)> = Vec::new();

    for root in 0..n {
        if !allowed[root] || mark[root] != Mark::New {
            continue;
        }
        mark[root] = Mark::Open;
        stack.push((root, 0, false));
        while let Some(top) = stack.last_mut() {
            let (v, next, _) = *top;
            if next < succ[v].len() {
                top.1 += 1;
                let w = succ[v][next];
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0, false));
                    }
                    Mark::Open => top.2 = true,
                    Mark::Done => {}
                }
                continue;
            }
            let (v, _, on_cycle) = stack.pop().expect("non-empty");
            result[v] = if on_cycle
                || succ[v]
                    .iter()
                    .any(|&w| result[w] == WalkLength::Unbounded)
            {
                WalkLength::Unbounded
            } else {
                let longest = succ[v]
                    .iter()
                    .map(|&w| match result[w] {
                        WalkLength::Finite(len) => len,
                        _ => 0,
                    })
                    .max()
                    .unwrap_or(0);
                WalkLength::Finite(longest + 1)
            };
            mark[v] = Mark::Done;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filter::fixtures::{f_a, f_b};

    fn chain() -> Filter {
        Filter::builder()
            .state("q1", 0)
            .state("q2", 0)
            .state("q3", 0)
            .edge("q1", "a", "q2")
            .edge("q2", "a", "q3")
            .build()
            .unwrap()
    }

    #[test]
    fn fixture_values() {
        let fb = f_b();
        assert_eq!(longest_color_avoiding(&fb, 0, 0), WalkLength::Blocked);
        assert_eq!(longest_color_avoiding(&fb, 0, 1), WalkLength::Unbounded);
        assert_eq!(longest_color_avoiding(&chain(), 0, 1), WalkLength::Finite(3));
        assert_eq!(longest_color_avoiding(&chain(), 2, 1), WalkLength::Finite(1));
    }

    #[test]
    fn forbidden_states_cut_walks() {
        let fa = f_a();
        // From A avoiding color 1: only the y self-loop on A remains.
        assert_eq!(longest_color_avoiding(&fa, 0, 1), WalkLength::Unbounded);
        // From B avoiding color 0: B's only edge goes to A.
        assert_eq!(longest_color_avoiding(&fa, 1, 0), WalkLength::Finite(1));
    }

    #[test]
    fn cycle_reached_through_a_finished_branch() {
        // r -> s (sink) ; r -> c1 <-> c2 ; t -> c1
        let f = Filter::builder()
            .state("t", 0)
            .state("r", 0)
            .state("s", 0)
            .state("c1", 0)
            .state("c2", 0)
            .edge("t", "a", "c1")
            .edge("r", "a", "s")
            .edge("r", "b", "c1")
            .edge("c1", "a", "c2")
            .edge("c2", "a", "c1")
            .build()
            .unwrap();
        let all = longest_walks(&f, None);
        assert_eq!(all[0], WalkLength::Unbounded);
        assert_eq!(all[1], WalkLength::Unbounded);
        assert_eq!(all[2], WalkLength::Finite(1));
    }

    #[test]
    fn exceeds_matches_vertex_count() {
        assert!(WalkLength::Finite(3).exceeds(2));
        assert!(!WalkLength::Finite(3).exceeds(3));
        assert!(!WalkLength::Blocked.exceeds(0));
        assert!(WalkLength::Unbounded.exceeds(1_000_000));
        assert_eq!(WalkLength::Blocked.as_signed(), Some(-1));
    }
}
