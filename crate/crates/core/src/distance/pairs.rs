use crate::filter::{Filter, StateIndex};

/// Successors of a state pair on one shared label.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Step {
    /// (q1', q2')
    pub both: usize,
    /// (q1', q2): only the first filter advanced
    pub first: usize,
    /// (q1, q2'): only the second filter advanced
    pub second: usize,
}

/// Dense index over `V1 x V2` with per-pair shared-label successors.
pub(crate) struct PairSpace {
    pub n2: usize,
    pub same_color: Vec<bool>,
    pub steps: Vec<Vec<Step>>,
}

impl PairSpace {
    pub fn new(f1: &Filter, f2: &Filter) -> Self {
        let n1 = f1.len();
        let n2 = f2.len();
        let mut same_color = Vec::with_capacity(n1 * n2);
        let mut steps = Vec::with_capacity(n1 * n2);
        for q1 in 0..n1 {
            let s1 = f1.state(q1);
            for q2 in 0..n2 {
                let s2 = f2.state(q2);
                same_color.push(s1.color() == s2.color());
                let shared = s1
                    .edges()
                    .iter()
                    .filter_map(|(label, &t1)| {
                        s2.successor(label).map(|t2| Step {
                            both: t1 * n2 + t2,
                            first: t1 * n2 + q2,
                            second: q1 * n2 + t2,
                        })
                    })
                    .collect();
                steps.push(shared);
            }
        }
        Self {
            n2,
            same_color,
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.same_color.len()
    }

    pub fn index(&self, q1: StateIndex, q2: StateIndex) -> usize {
        q1 * self.n2 + q2
    }

    pub fn split(&self, p: usize) -> (StateIndex, StateIndex) {
        (p / self.n2, p % self.n2)
    }
}
