use std::fmt;

use fixedbitset::FixedBitSet;

use crate::kripke::StateId;

/// A set of states of one structure.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        StateSet(b)
    }

    pub fn from_fn(n: usize, f: impl Fn(StateId) -> bool) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        for q in 0..n {
            if f(q) {
                b.insert(q);
            }
        }
        StateSet(b)
    }

    pub fn from_states(n: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        for q in states {
            b.insert(q);
        }
        StateSet(b)
    }

    /// Size of the underlying state space.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.0.contains(q)
    }

    pub fn insert(&mut self, q: StateId) {
        self.0.insert(q);
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.0.count_ones(..) == self.0.len()
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn complement(&self) -> StateSet {
        let mut b = self.0.clone();
        b.toggle_range(..);
        StateSet(b)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.ones()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
