//! Filter data model: deterministic, partially-defined transition graphs whose
//! states carry output colors.
//!
//! A [`FilterDef`] is the raw, possibly malformed description (what a file or a
//! builder produces). [`validate`] reports everything wrong with it, and
//! [`Filter::from_def`] turns a clean description into an immutable [`Filter`]
//! that every other module works with.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Output value of a state.
pub type Color = u32;

/// Position of a state inside [`Filter::states`].
pub type StateIndex = usize;

/// One state of a raw filter description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDef {
    pub id: String,
    pub color: Color,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub initial: bool,
}

/// One labeled transition of a raw filter description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDef {
    pub from: String,
    pub label: String,
    pub to: String,
}

/// Raw filter description, not yet checked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDef {
    pub states: Vec<StateDef>,
    pub edges: Vec<EdgeDef>,
    /// Labels declared up front. When present, every edge label must be listed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observation_space: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("duplicate state id `{id}`")]
    DuplicateState { id: String },
    #[error("no state is flagged initial")]
    MissingInitial,
    #[error("more than one initial state: {}", ids.join(", "))]
    MultipleInitial { ids: Vec<String> },
    #[error("edge #{edge}: state `{from}` already has an out-edge labeled `{label}`")]
    DuplicateEdge {
        edge: usize,
        from: String,
        label: String,
    },
    #[error("edge #{edge}: unknown source state `{from}`")]
    UnknownSource { edge: usize, from: String },
    #[error("edge #{edge}: unknown target state `{to}`")]
    UnknownTarget { edge: usize, to: String },
    #[error("edge #{edge}: empty observation label")]
    EmptyLabel { edge: usize },
    #[error("edge #{edge} ({from} -{label}-> {to}): label not in the declared observation space")]
    UndeclaredLabel {
        edge: usize,
        from: String,
        label: String,
        to: String,
    },
    #[error("declared observation label is empty")]
    EmptyDeclaredLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationWarning {
    #[error("state `{id}` has no out-edges")]
    SinkState { id: String },
    #[error("state `{id}` is unreachable from the initial state")]
    Unreachable { id: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks a raw description against the filter invariants.
///
/// Errors make the description unusable; warnings (sink states, unreachable
/// states) are legal but usually worth knowing about.
pub fn validate(def: &FilterDef) -> ValidationReport {
    let mut report = ValidationReport::default();

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, s) in def.states.iter().enumerate() {
        if index.insert(s.id.as_str(), i).is_some() {
            report.errors.push(ValidationError::DuplicateState { id: s.id.clone() });
        }
    }

    let initials: Vec<&StateDef> = def.states.iter().filter(|s| s.initial).collect();
    match initials.len() {
        0 => report.errors.push(ValidationError::MissingInitial),
        1 => {}
        _ => report.errors.push(ValidationError::MultipleInitial {
            ids: initials.iter().map(|s| s.id.clone()).collect(),
        }),
    }

    let declared: Option<HashSet<&str>> = def
        .observation_space
        .as_ref()
        .map(|labels| labels.iter().map(String::as_str).collect());
    if let Some(labels) = &def.observation_space {
        if labels.iter().any(String::is_empty) {
            report.errors.push(ValidationError::EmptyDeclaredLabel);
        }
    }

    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); def.states.len()];
    let mut has_out = vec![false; def.states.len()];
    for (e, edge) in def.edges.iter().enumerate() {
        let src = index.get(edge.from.as_str()).copied();
        let dst = index.get(edge.to.as_str()).copied();
        if src.is_none() {
            report.errors.push(ValidationError::UnknownSource {
                edge: e,
                from: edge.from.clone(),
            });
        }
        if dst.is_none() {
            report.errors.push(ValidationError::UnknownTarget {
                edge: e,
                to: edge.to.clone(),
            });
        }
        if edge.label.is_empty() {
            report.errors.push(ValidationError::EmptyLabel { edge: e });
        } else if let Some(declared) = &declared {
            if !declared.contains(edge.label.as_str()) {
                report.errors.push(ValidationError::UndeclaredLabel {
                    edge: e,
                    from: edge.from.clone(),
                    label: edge.label.clone(),
                    to: edge.to.clone(),
                });
            }
        }
        if !seen.insert((edge.from.as_str(), edge.label.as_str())) {
            report.errors.push(ValidationError::DuplicateEdge {
                edge: e,
                from: edge.from.clone(),
                label: edge.label.clone(),
            });
        }
        if let (Some(s), Some(t)) = (src, dst) {
            adjacency[s].push(t);
            has_out[s] = true;
        }
    }

    for (i, s) in def.states.iter().enumerate() {
        if !has_out[i] {
            report
                .warnings
                .push(ValidationWarning::SinkState { id: s.id.clone() });
        }
    }

    if initials.len() == 1 {
        let start = index[initials[0].id.as_str()];
        let reached = bfs(start, &adjacency);
        for (i, s) in def.states.iter().enumerate() {
            if !reached[i] {
                report
                    .warnings
                    .push(ValidationWarning::Unreachable { id: s.id.clone() });
            }
        }
    }

    report
}

fn bfs(start: usize, adjacency: &[Vec<usize>]) -> Vec<bool> {
    let mut reached = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([start]);
    reached[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !reached[w] {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }
    reached
}

/// A description failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InvalidFilter {
    pub errors: Vec<ValidationError>,
}

impl fmt::Display for InvalidFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid filter: ")?;
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// A state of a validated filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    id: String,
    color: Color,
    edges: BTreeMap<String, StateIndex>,
}

impl State {
    pub(crate) fn new(id: String, color: Color, edges: BTreeMap<String, StateIndex>) -> Self {
        Self { id, color, edges }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn color(&self) -> Color {
        self.color
    }

    /// Out-edges keyed by observation label, in label order.
    pub fn edges(&self) -> &BTreeMap<String, StateIndex> {
        &self.edges
    }

    pub fn successor(&self, label: &str) -> Option<StateIndex> {
        self.edges.get(label).copied()
    }
}

/// Observation index at which a run got stuck: the filter has no out-edge for
/// that observation from the state it had reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("filter failed at observation index {index}")]
pub struct RunFailure {
    pub index: usize,
}

/// A validated, immutable combinatorial filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    states: Vec<State>,
    initial: StateIndex,
    observations: BTreeSet<String>,
    index: HashMap<String, StateIndex>,
}

impl Filter {
    pub fn builder() -> FilterBuilder {
        FilterBuilder::default()
    }

    pub fn from_def(def: &FilterDef) -> Result<Self, InvalidFilter> {
        let report = validate(def);
        if !report.is_ok() {
            return Err(InvalidFilter {
                errors: report.errors,
            });
        }
        let index: HashMap<String, StateIndex> = def
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        let mut states: Vec<State> = def
            .states
            .iter()
            .map(|s| State::new(s.id.clone(), s.color, BTreeMap::new()))
            .collect();
        let mut observations: BTreeSet<String> = def
            .observation_space
            .iter()
            .flatten()
            .cloned()
            .collect();
        for e in &def.edges {
            states[index[&e.from]]
                .edges
                .insert(e.label.clone(), index[&e.to]);
            observations.insert(e.label.clone());
        }
        let initial = def
            .states
            .iter()
            .position(|s| s.initial)
            .expect("validated: one initial state");
        Ok(Self {
            states,
            initial,
            observations,
            index,
        })
    }

    /// Assembles a filter from already-consistent parts. Used by the merge and
    /// voting constructions, which produce valid filters by construction.
    pub(crate) fn from_states(
        states: Vec<State>,
        initial: StateIndex,
        mut observations: BTreeSet<String>,
    ) -> Self {
        let index: HashMap<String, StateIndex> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.clone(), i))
            .collect();
        debug_assert_eq!(index.len(), states.len(), "state ids must be unique");
        debug_assert!(initial < states.len());
        for s in &states {
            for (label, &t) in &s.edges {
                debug_assert!(t < states.len());
                observations.insert(label.clone());
            }
        }
        Self {
            states,
            initial,
            observations,
            index,
        }
    }

    pub fn to_def(&self) -> FilterDef {
        let states = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| StateDef {
                id: s.id.clone(),
                color: s.color,
                initial: i == self.initial,
            })
            .collect();
        let edges = self
            .states
            .iter()
            .flat_map(|s| {
                s.edges.iter().map(move |(label, &t)| EdgeDef {
                    from: s.id.clone(),
                    label: label.clone(),
                    to: self.states[t].id.clone(),
                })
            })
            .collect();
        FilterDef {
            states,
            edges,
            observation_space: Some(self.observations.iter().cloned().collect()),
        }
    }

    /// Warnings only; a constructed filter never has errors.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_def())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, q: StateIndex) -> &State {
        &self.states[q]
    }

    pub fn initial(&self) -> StateIndex {
        self.initial
    }

    pub fn index_of(&self, id: &str) -> Option<StateIndex> {
        self.index.get(id).copied()
    }

    pub fn color(&self, q: StateIndex) -> Color {
        self.states[q].color
    }

    pub fn successor(&self, q: StateIndex, label: &str) -> Option<StateIndex> {
        self.states[q].successor(label)
    }

    pub fn observation_space(&self) -> &BTreeSet<String> {
        &self.observations
    }

    pub fn edge_count(&self) -> usize {
        self.states.iter().map(|s| s.edges.len()).sum()
    }

    /// Runs from the initial state. See [`Filter::run_from`].
    pub fn run<S: AsRef<str>>(&self, observations: &[S]) -> Result<Vec<Color>, RunFailure> {
        self.run_from(self.initial, observations)
    }

    /// Output string produced from `start`: one color per visited state, so
    /// `observations.len() + 1` colors on success.
    pub fn run_from<S: AsRef<str>>(
        &self,
        start: StateIndex,
        observations: &[S],
    ) -> Result<Vec<Color>, RunFailure> {
        let mut q = start;
        let mut out = Vec::with_capacity(observations.len() + 1);
        out.push(self.color(q));
        for (index, y) in observations.iter().enumerate() {
            q = self
                .successor(q, y.as_ref())
                .ok_or(RunFailure { index })?;
            out.push(self.color(q));
        }
        Ok(out)
    }

    pub fn in_language<S: AsRef<str>>(&self, observations: &[S]) -> bool {
        self.run(observations).is_ok()
    }

    pub fn reachable_states(&self) -> BTreeSet<StateIndex> {
        self.reachable_mask()
            .into_iter()
            .enumerate()
            .filter_map(|(i, r)| r.then_some(i))
            .collect()
    }

    pub(crate) fn reachable_mask(&self) -> Vec<bool> {
        let adjacency: Vec<Vec<usize>> = self
            .states
            .iter()
            .map(|s| s.edges.values().copied().collect())
            .collect();
        bfs(self.initial, &adjacency)
    }

    pub fn has_unreachable_states(&self) -> bool {
        self.reachable_mask().iter().any(|r| !r)
    }

    /// Colors of reachable states.
    pub fn used_colors(&self) -> BTreeSet<Color> {
        self.reachable_mask()
            .into_iter()
            .enumerate()
            .filter(|&(_, r)| r)
            .map(|(i, _)| self.color(i))
            .collect()
    }
}

/// Labels on which both `q1` (in `f1`) and `q2` (in `f2`) have out-edges, in
/// label order. Labels are matched by string equality.
pub fn common_observations<'a>(
    f1: &'a Filter,
    q1: StateIndex,
    f2: &Filter,
    q2: StateIndex,
) -> Vec<&'a str> {
    let other = f2.state(q2);
    f1.state(q1)
        .edges
        .keys()
        .filter(|y| other.edges.contains_key(y.as_str()))
        .map(String::as_str)
        .collect()
}

/// Whether every string `f1` can process is also processed by `f2`.
///
/// Breadth-first search over reachable product pairs; fails as soon as some
/// pair has a label `f1` can take but `f2` cannot.
pub fn language_subset(f1: &Filter, f2: &Filter) -> bool {
    let start = (f1.initial, f2.initial);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for (label, &a2) in &f1.states[a].edges {
            let Some(b2) = f2.successor(b, label) else {
                return false;
            };
            if seen.insert((a2, b2)) {
                queue.push_back((a2, b2));
            }
        }
    }
    true
}

/// Incremental construction of a [`FilterDef`] / [`Filter`].
#[derive(Debug, Clone, Default)]
pub struct FilterBuilder {
    def: FilterDef,
    initial: Option<String>,
}

impl FilterBuilder {
    pub fn state(mut self, id: impl Into<String>, color: Color) -> Self {
        self.def.states.push(StateDef {
            id: id.into(),
            color,
            initial: false,
        });
        self
    }

    /// Marks `id` initial. Defaults to the first state when never called.
    pub fn initial(mut self, id: impl Into<String>) -> Self {
        self.initial = Some(id.into());
        self
    }

    pub fn edge(
        mut self,
        from: impl Into<String>,
        label: impl Into<String>,
        to: impl Into<String>,
    ) -> Self {
        self.def.edges.push(EdgeDef {
            from: from.into(),
            label: label.into(),
            to: to.into(),
        });
        self
    }

    pub fn observation(mut self, label: impl Into<String>) -> Self {
        self.def
            .observation_space
            .get_or_insert_with(Vec::new)
            .push(label.into());
        self
    }

    pub fn def(&self) -> FilterDef {
        let mut def = self.def.clone();
        match &self.initial {
            Some(id) => def
                .states
                .iter_mut()
                .filter(|s| &s.id == id)
                .for_each(|s| s.initial = true),
            None => {
                if let Some(first) = def.states.first_mut() {
                    first.initial = true;
                }
            }
        }
        def
    }

    pub fn build(&self) -> Result<Filter, InvalidFilter> {
        Filter::from_def(&self.def())
    }
}
