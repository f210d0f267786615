//! Distances between output (color) strings.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::filter::Color;

/// Costs of the three edit operations. Unit costs by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EditCosts {
    pub insert: u64,
    pub delete: u64,
    pub substitute: u64,
}

impl EditCosts {
    pub const UNIT: EditCosts = EditCosts {
        insert: 1,
        delete: 1,
        substitute: 1,
    };

    pub fn new(insert: u64, delete: u64, substitute: u64) -> Self {
        Self {
            insert,
            delete,
            substitute,
        }
    }

    /// Same costs with insertion and deletion exchanged.
    pub fn swapped(self) -> Self {
        Self {
            insert: self.delete,
            delete: self.insert,
            substitute: self.substitute,
        }
    }

    /// Cheapest way to turn one mismatched symbol into another.
    pub fn replace(self) -> u64 {
        self.substitute.min(self.delete + self.insert)
    }
}

impl Default for EditCosts {
    fn default() -> Self {
        Self::UNIT
    }
}

impl fmt::Display for EditCosts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.insert, self.delete, self.substitute)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expected costs as INS,DEL,SUB (nonnegative integers), got `{0}`")]
pub struct ParseCostsError(String);

impl FromStr for EditCosts {
    type Err = ParseCostsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<u64> = s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ParseCostsError(s.to_string()))?;
        match parts[..] {
            [i, d, c] => Ok(Self::new(i, d, c)),
            _ => Err(ParseCostsError(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("hamming distance needs equal lengths, got {left} and {right}")]
pub struct LengthMismatch {
    pub left: usize,
    pub right: usize,
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming(a: &[Color], b: &[Color]) -> Result<u64, LengthMismatch> {
    if a.len() != b.len() {
        return Err(LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count() as u64)
}

/// Minimum total cost of turning `a` into `b` (Wagner-Fischer, two rows).
pub fn edit(a: &[Color], b: &[Color], costs: EditCosts) -> u64 {
    let mut prev: Vec<u64> = (0..=b.len() as u64).map(|j| j * costs.insert).collect();
    let mut cur = vec![0u64; b.len() + 1];
    for (i, &x) in a.iter().enumerate() {
        cur[0] = (i as u64 + 1) * costs.delete;
        for (j, &y) in b.iter().enumerate() {
            let diag = prev[j] + if x == y { 0 } else { costs.substitute };
            let del = prev[j + 1] + costs.delete;
            let ins = cur[j] + costs.insert;
            cur[j + 1] = diag.min(del).min(ins);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&[0, 1, 0], &[0, 0, 0]), Ok(1));
        assert_eq!(hamming(&[3, 4, 5], &[3, 4, 5]), Ok(0));
        assert_eq!(hamming(&[0, 1], &[1, 0]), Ok(2));
        assert_eq!(
            hamming(&[0], &[0, 1]),
            Err(LengthMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn edit_examples() {
        assert_eq!(edit(&[0, 1, 0], &[0, 0, 0], EditCosts::UNIT), 1);
        assert_eq!(edit(&[0], &[0, 0, 0], EditCosts::UNIT), 2);
        // delete the leading 0 (3) beats substitute+delete (5+3)
        assert_eq!(edit(&[0, 1], &[1], EditCosts::new(2, 3, 5)), 3);
        assert_eq!(edit(&[], &[1, 2], EditCosts::new(2, 3, 5)), 4);
        assert_eq!(edit(&[1, 2], &[], EditCosts::new(2, 3, 5)), 6);
    }

    #[test]
    fn costs_parse() {
        assert_eq!("1,2,3".parse::<EditCosts>(), Ok(EditCosts::new(1, 2, 3)));
        assert!("1,2".parse::<EditCosts>().is_err());
        assert!("a,b,c".parse::<EditCosts>().is_err());
    }

    #[test]
    fn unit_edit_triangle_inequality_exhaustive() {
        let mut strings: Vec<Vec<Color>> = vec![vec![]];
        let mut frontier: Vec<Vec<Color>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for s in &frontier {
                for c in 0..3 {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
            strings.extend(next.iter().cloned());
            frontier = next;
        }
        // lengths <= 4 exhaustively (121 strings); longer lengths via proptest below
        let d: Vec<Vec<u64>> = strings
            .iter()
            .map(|a| strings.iter().map(|b| edit(a, b, EditCosts::UNIT)).collect())
            .collect();
        let n = strings.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    assert!(d[a][c] <= d[a][b] + d[b][c]);
                }
            }
        }
    }

    fn color_string(max: usize) -> impl Strategy<Value = Vec<Color>> {
        prop::collection::vec(0u32..3, 0..=max)
    }

    proptest! {
        #[test]
        fn unit_edit_bounded_by_hamming(pair in (0usize..=8).prop_flat_map(|n| (
            prop::collection::vec(0u32..3, n),
            prop::collection::vec(0u32..3, n),
        ))) {
            let (a, b) = pair;
            prop_assert!(edit(&a, &b, EditCosts::UNIT) <= hamming(&a, &b).unwrap());
        }

        #[test]
        fn edit_symmetric_under_role_swap(
            a in color_string(7),
            b in color_string(7),
            i in 0u64..5, d in 0u64..5, s in 0u64..5,
        ) {
            let costs = EditCosts::new(i, d, s);
            prop_assert_eq!(edit(&a, &b, costs), edit(&b, &a, costs.swapped()));
            prop_assert_eq!(edit(&a, &a, costs), 0);
            prop_assert_eq!(hamming(&a, &a).unwrap(), 0);
        }

        #[test]
        fn unit_edit_triangle(a in color_string(6), b in color_string(6), c in color_string(6)) {
            let u = EditCosts::UNIT;
            prop_assert!(edit(&a, &c, u) <= edit(&a, &b, u) + edit(&b, &c, u));
        }
    }
}
