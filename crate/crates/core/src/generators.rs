//! Benchmark filter families.
//!
//! Every generator tracks the set of world configurations consistent with the
//! observations so far. A filter state is one reachable possible-set, starting
//! from the set of all configurations; an observation that leaves nothing
//! possible has no edge.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::filter::{Color, Filter, FilterBuilder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("annulus needs at least 3 regions, got {0}")]
    TooFewRegions(usize),
    #[error("annulus supports 1 or 2 robots, got {0}")]
    Robots(usize),
    #[error("corridor needs length >= 3 and 1 < corner_at < length (got length {length}, corner_at {corner_at})")]
    Corridor { length: usize, corner_at: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnnulusSpec {
    pub n: usize,
    pub robots: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorridorSpec {
    pub length: usize,
    pub corner_at: usize,
}

pub fn gen_annulus(spec: AnnulusSpec) -> Result<Filter, GeneratorError> {
    match spec.robots {
        1 => gen_annulus_single(spec.n),
        2 => gen_annulus_two_robot(spec.n),
        r => Err(GeneratorError::Robots(r)),
    }
}

/// One robot in a ring of `n` regions; beam `b_i` separates regions `i` and
/// `i + 1` (`b_n` separates `n` and 1). Outputs 1 exactly when the robot is
/// known to be in region 1.
pub fn gen_annulus_single(n: usize) -> Result<Filter, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooFewRegions(n));
    }
    let all: BTreeSet<usize> = (1..=n).collect();
    Ok(possible_sets(
        all,
        &beam_labels(n),
        |s, i| {
            let (a, b) = beam_sides(n, i);
            let mut next = BTreeSet::new();
            if s.contains(&b) {
                next.insert(a);
            }
            if s.contains(&a) {
                next.insert(b);
            }
            next
        },
        |s| Color::from(s.len() == 1 && s.contains(&1)),
        |r| r.to_string(),
    ))
}

/// Two indistinguishable robots; each observation is one robot crossing the
/// named beam. Outputs 0 exactly when every possible configuration has both
/// robots in the same region.
pub fn gen_annulus_two_robot(n: usize) -> Result<Filter, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooFewRegions(n));
    }
    let all: BTreeSet<(usize, usize)> = (1..=n)
        .flat_map(|a| (a..=n).map(move |b| (a, b)))
        .collect();
    Ok(possible_sets(
        all,
        &beam_labels(n),
        |s, i| {
            let (a, b) = beam_sides(n, i);
            let cross = |r: usize| {
                if r == a {
                    Some(b)
                } else if r == b {
                    Some(a)
                } else {
                    None
                }
            };
            let mut next = BTreeSet::new();
            for &(x, y) in s {
                if let Some(x2) = cross(x) {
                    next.insert(pair(x2, y));
                }
                if let Some(y2) = cross(y) {
                    next.insert(pair(x, y2));
                }
            }
            next
        },
        |s| Color::from(!s.iter().all(|&(x, y)| x == y)),
        |&(x, y)| format!("{x}-{y}"),
    ))
}

/// Sensorless robot in a corridor of cells `1..=length` that moves one or
/// two cells per `step`, never jumping over the corner cell and stopping at
/// the last cell. Outputs 0 exactly when the robot is known to be at the end.
pub fn gen_lcorridor(spec: CorridorSpec) -> Result<Filter, GeneratorError> {
    let CorridorSpec { length, corner_at } = spec;
    if length < 3 || corner_at <= 1 || corner_at >= length {
        return Err(GeneratorError::Corridor { length, corner_at });
    }
    let all: BTreeSet<usize> = (1..=length).collect();
    Ok(possible_sets(
        all,
        &["step".to_string()],
        |s, _| corridor_step(spec, s),
        |s| Color::from(!(s.len() == 1 && s.contains(&length))),
        |p| p.to_string(),
    ))
}

/// Cells the robot may occupy after one step from any cell in `cells`.
pub fn corridor_step(spec: CorridorSpec, cells: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut next = BTreeSet::new();
    for &p in cells {
        next.insert((p + 1).min(spec.length));
        if p + 1 != spec.corner_at {
            next.insert((p + 2).min(spec.length));
        }
    }
    next
}

fn beam_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("b{i}")).collect()
}

/// Regions on either side of beam `i` (0-based label index).
fn beam_sides(n: usize, i: usize) -> (usize, usize) {
    let a = i + 1;
    (a, a % n + 1)
}

fn pair(x: usize, y: usize) -> (usize, usize) {
    (x.min(y), x.max(y))
}

/// Breadth-first construction over reachable possible-sets. States appear in
/// discovery order, labels in the given order.
fn possible_sets<T: Ord + Clone>(
    initial: BTreeSet<T>,
    labels: &[String],
    step: impl Fn(&BTreeSet<T>, usize) -> BTreeSet<T>,
    color: impl Fn(&BTreeSet<T>) -> Color,
    name: impl Fn(&T) -> String,
) -> Filter {
    let id = |s: &BTreeSet<T>| {
        let parts: Vec<String> = s.iter().map(&name).collect();
        format!("{{{}}}", parts.join(","))
    };
    let mut index: BTreeMap<BTreeSet<T>, usize> = BTreeMap::new();
    let mut order: Vec<BTreeSet<T>> = Vec::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(initial.clone(), 0);
    order.push(initial.clone());
    queue.push_back(0);
    while let Some(q) = queue.pop_front() {
        for y in 0..labels.len() {
            let next = step(&order[q], y);
            if next.is_empty() {
                continue;
            }
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    let t = order.len();
                    index.insert(next.clone(), t);
                    order.push(next);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((q, y, t));
        }
    }

    let ids: Vec<String> = order.iter().map(id).collect();
    let mut b = FilterBuilder::default();
    for (s, sid) in order.iter().zip(&ids) {
        b = b.state(sid.clone(), color(s));
    }
    for y in labels {
        b = b.observation(y.clone());
    }
    for (q, y, t) in edges {
        b = b.edge(ids[q].clone(), labels[y].clone(), ids[t].clone());
    }
    b.build().expect("possible-set construction is deterministic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_robot_state_counts() {
        assert_eq!(gen_annulus_single(8).unwrap().len(), 17);
        for n in 4..=12 {
            assert_eq!(gen_annulus_single(n).unwrap().len(), 2 * n + 1, "n = {n}");
        }
        assert!(gen_annulus_single(2).is_err());
    }

    #[test]
    fn single_robot_transitions() {
        let f = gen_annulus_single(4).unwrap();
        assert_eq!(f.len(), 9);
        let q = f.successor(f.initial(), "b1").unwrap();
        assert_eq!(f.state(q).id(), "{1,2}");
        for i in 1..=4 {
            let id = format!("{{{},{}}}", i.min(i % 4 + 1), i.max(i % 4 + 1));
            let q = f.index_of(&id).unwrap();
            assert_eq!(f.successor(q, &format!("b{i}")), Some(q), "{id}");
        }
        let one = f.index_of("{1}").unwrap();
        assert_eq!(f.color(one), 1);
        assert_eq!(f.used_colors(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn two_robot_snapshot() {
        let f = gen_annulus_two_robot(3).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.color(f.initial()), 1);
        assert!(f.validate().is_ok());
        assert!(!f.has_unreachable_states());
    }

    #[test]
    fn two_robot_successors_touch_the_beam() {
        let n = 5;
        let f = gen_annulus_two_robot(n).unwrap();
        // Ids list configurations as "x-y"; after b_i some robot sits next to beam i.
        for q in 0..f.len() {
            for (y, &t) in f.state(q).edges() {
                let i: usize = y[1..].parse().unwrap();
                let (a, b) = beam_sides(n, i - 1);
                let inner = f.state(t).id().trim_matches(|c| c == '{' || c == '}');
                for conf in inner.split(',') {
                    let (x, z) = conf.split_once('-').unwrap();
                    let (x, z): (usize, usize) = (x.parse().unwrap(), z.parse().unwrap());
                    assert!([x, z].iter().any(|r| *r == a || *r == b), "{conf} after {y}");
                }
            }
        }
    }

    #[test]
    fn corridor_rules() {
        let f = gen_lcorridor(CorridorSpec {
            length: 5,
            corner_at: 3,
        })
        .unwrap();
        let end = f.index_of("{5}").unwrap();
        assert_eq!(f.successor(end, "step"), Some(end));
        assert_eq!(f.color(end), 0);
        assert!(f.validate().is_ok());
        assert!(gen_lcorridor(CorridorSpec {
            length: 5,
            corner_at: 5
        })
        .is_err());
    }

    #[test]
    fn corridor_step_cannot_skip_the_corner() {
        let spec = CorridorSpec {
            length: 5,
            corner_at: 3,
        };
        assert_eq!(corridor_step(spec, &BTreeSet::from([2])), BTreeSet::from([3]));
        assert_eq!(corridor_step(spec, &BTreeSet::from([3])), BTreeSet::from([4, 5]));
        assert_eq!(corridor_step(spec, &BTreeSet::from([5])), BTreeSet::from([5]));
    }

    #[test]
    fn corridor_size_is_nondecreasing_in_length() {
        let counts: Vec<usize> = (4..=16)
            .map(|length| {
                gen_lcorridor(CorridorSpec {
                    length,
                    corner_at: length / 2,
                })
                .unwrap()
                .len()
            })
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    }

    #[test]
    fn generated_colors_are_binary() {
        for f in [
            gen_annulus_single(5).unwrap(),
            gen_annulus_two_robot(4).unwrap(),
            gen_lcorridor(CorridorSpec {
                length: 8,
                corner_at: 4,
            })
            .unwrap(),
        ] {
            assert_eq!(f.used_colors(), BTreeSet::from([0, 1]));
            assert!(!f.has_unreachable_states());
        }
    }
}
