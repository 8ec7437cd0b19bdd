use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::core::{AcceptanceKind, TransCache};
use super::{AState, AutomatonError, Letter, NondetAutomaton, Npta, Pbf, TreeAutomaton};
use crate::logic::Prop;

/// Existential projection: the result accepts a tree iff some relabelling
/// of `props` is accepted by `n`. Same states, same priorities.
pub fn project(n: &Npta, props: &BTreeSet<Prop>) -> Npta {
    let mask = n.alphabet().mask(props.iter().copied());
    let aut = Projected {
        inner: n.aut.clone(),
        mask,
        cache: TransCache::new(HashMap::new()),
    };
    Npta::new(Rc::new(aut), n.alphabet().clone(), n.degrees())
}

struct Projected {
    inner: Rc<dyn NondetAutomaton>,
    mask: Letter,
    cache: TransCache<Rc<[Vec<AState>]>>,
}

impl TreeAutomaton for Projected {
    fn initial(&self) -> AState {
        self.inner.initial()
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        Ok(super::core::pbf_of_choices(&self.choices(q, letter, degree)?))
    }

    fn priority(&self, q: AState) -> u32 {
        self.inner.priority(q)
    }

    fn kind(&self) -> AcceptanceKind {
        self.inner.kind()
    }

    fn discovered(&self) -> usize {
        self.inner.discovered()
    }

    fn describe(&self, q: AState) -> String {
        self.inner.describe(q)
    }
}

impl NondetAutomaton for Projected {
    fn choices(&self, q: AState, letter: Letter, degree: usize) -> Result<Rc<[Vec<AState>]>, AutomatonError> {
        let base = letter & !self.mask;
        if let Some(c) = self.cache.borrow().get(&(q, base, degree)) {
            return Ok(c.clone());
        }
        let mut all: Vec<Vec<AState>> = Vec::new();
        // every sub-mask of `mask`
        let mut sub = self.mask;
        loop {
            all.extend(self.inner.choices(q, base | sub, degree)?.iter().cloned());
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.mask;
        }
        all.sort_unstable();
        all.dedup();
        let c: Rc<[Vec<AState>]> = all.into();
        self.cache.borrow_mut().insert((q, base, degree), c.clone());
        Ok(c)
    }
}
