//! Finite Kripke structures with ordered successors.

mod encode;
mod io;
mod variants;

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::logic::Prop;

pub use encode::{binary_encode, BinaryEncoding, P_INT};
pub use io::{parse_structure, to_dot, StructureError};
pub use variants::{relabel_variants, EnumerationBudget, RelabelVariants};

pub type StateId = usize;

/// A finite transition system with a total relation. The order of states is
/// the declaration order, and every successor list is sorted by it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kripke {
    names: Vec<String>,
    labels: Vec<BTreeSet<Prop>>,
    succ: Vec<Vec<StateId>>,
    index: HashMap<String, StateId>,
    init: Option<StateId>,
}

/// Incremental construction of a [`Kripke`] structure.
#[derive(Clone, Debug, Default)]
pub struct KripkeBuilder {
    names: Vec<String>,
    labels: Vec<BTreeSet<Prop>>,
    edges: Vec<BTreeSet<StateId>>,
    index: HashMap<String, StateId>,
    init: Option<StateId>,
}

impl KripkeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state<I, P>(&mut self, name: &str, labels: I) -> Result<StateId, StructureError>
    where
        I: IntoIterator<Item = P>,
        P: Into<Prop>,
    {
        if self.index.contains_key(name) {
            return Err(StructureError::DuplicateState(name.to_string()));
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.labels.push(labels.into_iter().map(Into::into).collect());
        self.edges.push(BTreeSet::new());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn edge(&mut self, from: StateId, to: StateId) {
        self.edges[from].insert(to);
    }

    pub fn edge_by_name(&mut self, from: &str, to: &str) -> Result<(), StructureError> {
        let f = self.id(from).ok_or_else(|| StructureError::UnknownState(from.to_string()))?;
        let t = self.id(to).ok_or_else(|| StructureError::UnknownState(to.to_string()))?;
        self.edge(f, t);
        Ok(())
    }

    pub fn label(&mut self, state: StateId, p: Prop) {
        self.labels[state].insert(p);
    }

    pub fn init(&mut self, state: StateId) {
        self.init = Some(state);
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn build(self) -> Result<Kripke, StructureError> {
        if self.names.is_empty() {
            return Err(StructureError::Empty);
        }
        if let Some(q) = self.edges.iter().position(BTreeSet::is_empty) {
            return Err(StructureError::NotTotal(self.names[q].clone()));
        }
        Ok(Kripke {
            names: self.names,
            labels: self.labels,
            succ: self.edges.into_iter().map(|s| s.into_iter().collect()).collect(),
            index: self.index,
            init: self.init,
        })
    }
}

impl Kripke {
    pub fn builder() -> KripkeBuilder {
        KripkeBuilder::new()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.names.len()
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn init(&self) -> Option<StateId> {
        self.init
    }

    pub fn labels(&self, q: StateId) -> &BTreeSet<Prop> {
        &self.labels[q]
    }

    pub fn has_label(&self, q: StateId, p: Prop) -> bool {
        self.labels[q].contains(&p)
    }

    /// Ordered successor list.
    pub fn succ(&self, q: StateId) -> &[StateId] {
        &self.succ[q]
    }

    pub fn degree(&self, q: StateId) -> usize {
        self.succ[q].len()
    }

    /// The `i`-th successor, if any.
    pub fn succ_at(&self, q: StateId, i: usize) -> Option<StateId> {
        self.succ[q].get(i).copied()
    }

    /// The state reached by following the directions of `word` from `q`; this is
    /// the state whose label the unwinding carries at node `word`.
    pub fn succ_word(&self, q: StateId, word: &[usize]) -> Option<StateId> {
        word.iter().try_fold(q, |s, &i| self.succ_at(s, i))
    }

    /// Every proposition labelling some state.
    pub fn props(&self) -> BTreeSet<Prop> {
        self.labels.iter().flatten().copied().collect()
    }

    /// States reachable from `q`, in state order.
    pub fn reachable(&self, q: StateId) -> Vec<StateId> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([q]);
        seen[q] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        self.states().filter(|&s| seen[s]).collect()
    }

    /// Degrees occurring in the part reachable from `q`.
    pub fn degrees_from(&self, q: StateId) -> Vec<usize> {
        let ds: BTreeSet<usize> = self.reachable(q).into_iter().map(|s| self.degree(s)).collect();
        ds.into_iter().collect()
    }

    /// Copy with the given label sets.
    pub fn with_labels(&self, labels: Vec<BTreeSet<Prop>>) -> Kripke {
        assert_eq!(labels.len(), self.len());
        Kripke {
            labels,
            ..self.clone()
        }
    }

    /// Copy with proposition `p` relabelled to hold exactly on `states`.
    pub fn relabel(&self, p: Prop, holds: impl Fn(StateId) -> bool) -> Kripke {
        let mut labels = self.labels.clone();
        for (q, l) in labels.iter_mut().enumerate() {
            if holds(q) {
                l.insert(p);
            } else {
                l.remove(&p);
            }
        }
        self.with_labels(labels)
    }

    pub fn set_init(&mut self, q: Option<StateId>) {
        self.init = q;
    }

    /// Induced substructure on the states reachable from `q`; returns the
    /// structure and the new id of `q`.
    pub fn reachable_part(&self, q: StateId) -> (Kripke, StateId) {
        let keep = self.reachable(q);
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &s) in keep.iter().enumerate() {
            new_id[s] = i;
        }
        let mut b = KripkeBuilder::new();
        for &s in &keep {
            b.state(&self.names[s], self.labels[s].iter().copied())
                .expect("names are unique");
        }
        for &s in &keep {
            for &t in &self.succ[s] {
                b.edge(new_id[s], new_id[t]);
            }
        }
        b.init(new_id[q]);
        (b.build().expect("reachable part is total"), new_id[q])
    }
}

/// Same states, same transitions, and labels agreeing on `props`.
pub fn p_equivalent(s1: &Kripke, s2: &Kripke, props: &BTreeSet<Prop>) -> bool {
    s1.names == s2.names
        && s1.succ == s2.succ
        && s1
            .labels
            .iter()
            .zip(&s2.labels)
            .all(|(a, b)| props.iter().all(|p| a.contains(p) == b.contains(p)))
}
