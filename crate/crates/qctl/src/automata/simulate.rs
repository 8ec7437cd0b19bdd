use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::rc::Rc;

use super::core::{blowup, AcceptanceKind, Interner, TransCache};
use super::pbf::Move;
use super::{AState, Apta, AutomatonError, Letter, Limits, NondetAutomaton, Npta, Pbf, TreeAutomaton};

/// Alternation-removal construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimulationMethod {
    /// Breakpoint for Büchi-type inputs, Safra otherwise.
    Auto,
    /// Subset construction with a breakpoint; needs a Büchi-type input.
    Breakpoint,
    /// Safra trees over a trace-violation detector; any parity input.
    Safra,
}

/// Nondeterministic automaton accepting the same trees as `a`.
///
/// A run of the result guesses, at every node and for every active state of
/// `a`, a minimal model of its transition, and tracks along each branch all
/// traces through those choices with a deterministic word automaton that
/// accepts iff every trace satisfies the parity condition.
pub fn simulate(a: &Apta, limits: &Limits) -> Result<Npta, AutomatonError> {
    simulate_with(a, SimulationMethod::Auto, limits)
}

pub fn simulate_with(a: &Apta, method: SimulationMethod, limits: &Limits) -> Result<Npta, AutomatonError> {
    let buchi = a.kind() <= AcceptanceKind::Buchi;
    let aut: Rc<dyn NondetAutomaton> = match method {
        SimulationMethod::Auto if buchi => Rc::new(Simulated::new(Breakpoint { source: a.aut.clone() }, a, *limits)),
        SimulationMethod::Breakpoint if buchi => {
            Rc::new(Simulated::new(Breakpoint { source: a.aut.clone() }, a, *limits))
        }
        SimulationMethod::Breakpoint => return Err(AutomatonError::Mismatch("acceptance kind (breakpoint needs Büchi)")),
        _ => Rc::new(Simulated::new(Safra { source: a.aut.clone() }, a, *limits)),
    };
    Ok(Npta::new(aut, a.alphabet().clone(), a.degrees()))
}

/// A deterministic tracker of all traces along one branch.
trait Tracker {
    type Key: Clone + Eq + Hash + Debug;
    fn initial(&self) -> Self::Key;
    /// Automaton states with an obligation at the current node, sorted.
    fn active(&self, k: &Self::Key) -> Vec<AState>;
    /// Advances along one direction; `succ(q)` lists the states `q` sends
    /// there.
    fn step(&self, k: &Self::Key, succ: &dyn Fn(AState) -> Vec<AState>) -> Self::Key;
    fn priority(&self, k: &Self::Key) -> u32;
    fn kind(&self) -> AcceptanceKind;
    fn describe(&self, k: &Self::Key) -> String;
}

struct Simulated<T: Tracker> {
    tracker: T,
    source: Rc<dyn TreeAutomaton>,
    states: RefCell<Interner<T::Key>>,
    choices: TransCache<Rc<[Vec<AState>]>>,
    models: TransCache<Rc<Vec<Vec<Move>>>>,
    limits: Limits,
}

impl<T: Tracker> Simulated<T> {
    fn new(tracker: T, a: &Apta, limits: Limits) -> Self {
        let s = Simulated {
            source: a.aut.clone(),
            states: RefCell::new(Interner::new()),
            choices: RefCell::new(HashMap::new()),
            models: RefCell::new(HashMap::new()),
            limits,
            tracker,
        };
        let init = s.tracker.initial();
        s.states.borrow_mut().intern(init, usize::MAX).expect("first state");
        s
    }

    fn key(&self, q: AState) -> T::Key {
        self.states.borrow().keys[q].clone()
    }

    fn models(&self, q: AState, letter: Letter, d: usize) -> Result<Rc<Vec<Vec<Move>>>, AutomatonError> {
        if let Some(m) = self.models.borrow().get(&(q, letter, d)) {
            return Ok(m.clone());
        }
        let f = self.source.transition(q, letter, d)?;
        let m = Rc::new(
            f.minimal_models(self.limits.max_models)
                .map_err(|_| blowup("minimal models of one transition", self.limits.max_models))?,
        );
        self.models.borrow_mut().insert((q, letter, d), m.clone());
        Ok(m)
    }

    /// One tuple per minimal vector of per-direction obligation sets. Two
    /// choices of models with the same vector lead to states with the same
    /// active sets, hence the same languages, and a choice whose vector is
    /// pointwise larger than another's only loses trees. Safra states also
    /// remember which trace produced which obligation, so for them the
    /// vector records edges and no pruning is done.
    fn compute(&self, q: AState, letter: Letter, d: usize) -> Result<Vec<Vec<AState>>, AutomatonError> {
        let key = self.key(q);
        let active = self.tracker.active(&key);
        let mut options = Vec::with_capacity(active.len());
        for &a in &active {
            let m = self.models(a, letter, d)?;
            if m.is_empty() {
                return Ok(Vec::new());
            }
            options.push(m);
        }
        let history = self.tracker.kind() == AcceptanceKind::Parity;
        // (obligations per direction, model picked for each state so far)
        let mut partial: Vec<(Vec<Vec<Obligation>>, Vec<u32>)> = vec![(vec![Vec::new(); d], Vec::new())];
        for (&a, models) in active.iter().zip(&options) {
            let source = if history { a } else { AState::MAX };
            let mut next: HashMap<Vec<Vec<Obligation>>, Vec<u32>> = HashMap::new();
            for (sets, picks) in &partial {
                for (k, model) in models.iter().enumerate() {
                    let mut grown = sets.clone();
                    for &(c, r) in model {
                        if let Err(i) = grown[c].binary_search(&(r, source)) {
                            grown[c].insert(i, (r, source));
                        }
                    }
                    next.entry(grown).or_insert_with(|| {
                        let mut p = picks.clone();
                        p.push(k as u32);
                        p
                    });
                }
            }
            if next.len() > self.limits.max_choices {
                return Err(blowup("disjuncts of one transition", self.limits.max_choices));
            }
            partial = next.into_iter().collect();
            // hash order would leak into the picks kept for later vectors
            partial.sort_unstable();
            if !history {
                partial = minimal_vectors(partial);
            }
        }
        let mut tuples: Vec<Vec<AState>> = Vec::with_capacity(partial.len());
        for (_, picks) in &partial {
            let mut tuple = Vec::with_capacity(d);
            for c in 0..d {
                let lookup = |a: AState| -> Vec<AState> {
                    let Ok(i) = active.binary_search(&a) else {
                        return Vec::new();
                    };
                    options[i][picks[i] as usize].iter().filter(|m| m.0 == c).map(|m| m.1).collect()
                };
                let next = self.tracker.step(&key, &lookup);
                tuple.push(self.states.borrow_mut().intern(next, self.limits.max_states)?);
            }
            tuples.push(tuple);
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(tuples)
    }
}

/// Target state, plus the source state when history matters.
type Obligation = (AState, AState);

/// Keeps the entries whose set vectors are minimal under pointwise
/// inclusion. Quadratic, so very large families are returned as they are.
fn minimal_vectors<P>(mut items: Vec<(Vec<Vec<Obligation>>, P)>) -> Vec<(Vec<Vec<Obligation>>, P)> {
    if items.len() < 2 || items.len() > 4000 {
        return items;
    }
    let size = |v: &Vec<Vec<Obligation>>| v.iter().map(Vec::len).sum::<usize>();
    items.sort_by(|a, b| size(&a.0).cmp(&size(&b.0)).then_with(|| a.0.cmp(&b.0)));
    let subset = |a: &[Obligation], b: &[Obligation]| a.len() <= b.len() && a.iter().all(|x| b.binary_search(x).is_ok());
    let mut kept: Vec<(Vec<Vec<Obligation>>, P)> = Vec::new();
    for item in items {
        let dominated = kept
            .iter()
            .any(|(k, _)| k.iter().zip(&item.0).all(|(x, y)| subset(x, y)));
        if !dominated {
            kept.push(item);
        }
    }
    kept
}

impl<T: Tracker> TreeAutomaton for Simulated<T> {
    fn initial(&self) -> AState {
        0
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        Ok(super::core::pbf_of_choices(&self.choices(q, letter, degree)?))
    }

    fn priority(&self, q: AState) -> u32 {
        self.tracker.priority(&self.key(q))
    }

    fn kind(&self) -> AcceptanceKind {
        self.tracker.kind()
    }

    fn discovered(&self) -> usize {
        self.states.borrow().len()
    }

    fn describe(&self, q: AState) -> String {
        self.tracker.describe(&self.key(q))
    }
}

impl<T: Tracker> NondetAutomaton for Simulated<T> {
    fn choices(&self, q: AState, letter: Letter, degree: usize) -> Result<Rc<[Vec<AState>]>, AutomatonError> {
        if let Some(c) = self.choices.borrow().get(&(q, letter, degree)) {
            return Ok(c.clone());
        }
        let c: Rc<[Vec<AState>]> = self.compute(q, letter, degree)?.into();
        self.choices.borrow_mut().insert((q, letter, degree), c.clone());
        Ok(c)
    }
}

fn union_of(states: &[AState], succ: &dyn Fn(AState) -> Vec<AState>) -> Vec<AState> {
    let mut out: Vec<AState> = states.iter().flat_map(|&q| succ(q)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Subset construction with a breakpoint set of traces that still owe a
/// visit to an even-priority state.
struct Breakpoint {
    source: Rc<dyn TreeAutomaton>,
}

impl Tracker for Breakpoint {
    /// (all active states, owing states)
    type Key = (Vec<AState>, Vec<AState>);

    fn initial(&self) -> Self::Key {
        (vec![self.source.initial()], Vec::new())
    }

    fn active(&self, k: &Self::Key) -> Vec<AState> {
        k.0.clone()
    }

    fn step(&self, k: &Self::Key, succ: &dyn Fn(AState) -> Vec<AState>) -> Self::Key {
        let all = union_of(&k.0, succ);
        let base = if k.1.is_empty() { all.clone() } else { union_of(&k.1, succ) };
        let owing = base.into_iter().filter(|&q| self.source.priority(q) % 2 == 1).collect();
        (all, owing)
    }

    fn priority(&self, k: &Self::Key) -> u32 {
        u32::from(!k.1.is_empty())
    }

    fn kind(&self) -> AcceptanceKind {
        AcceptanceKind::Buchi
    }

    fn describe(&self, k: &Self::Key) -> String {
        format!("{:?}/{:?}", k.0, k.1)
    }
}

/// No guessed priority yet.
const FREE: u32 = u32::MAX;
/// Emitted when a Safra step has neither a green nor a removed node.
const QUIET: u32 = (1 << 30) - 1;

/// Safra trees over a nondeterministic Büchi detector of rejecting traces.
/// A detector state is `(q, j)`: `j` is either free or an odd priority
/// guessed to be the least one seen infinitely often; from then on only
/// priorities `>= j` are allowed and visits to priority `j` are accepting.
/// The output priorities are those of the determinized detector shifted by
/// one, so a branch is accepted iff no trace is rejecting.
struct Safra {
    source: Rc<dyn TreeAutomaton>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct SafraNode {
    parent: u32,
    label: Vec<(AState, u32)>,
}

impl Safra {
    fn buchi_accepting(&self, (q, j): (AState, u32)) -> bool {
        j != FREE && self.source.priority(q) == j
    }

    fn guesses(&self, q: AState, out: &mut Vec<(AState, u32)>) {
        out.push((q, FREE));
        let w = self.source.priority(q);
        if w % 2 == 1 {
            out.push((q, w));
        }
    }

    fn advance(&self, label: &[(AState, u32)], succ: &dyn Fn(AState) -> Vec<AState>) -> Vec<(AState, u32)> {
        let mut out = Vec::new();
        for &(q, j) in label {
            for r in succ(q) {
                if j == FREE {
                    self.guesses(r, &mut out);
                } else if self.source.priority(r) >= j {
                    out.push((r, j));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl Tracker for Safra {
    /// (nodes in age order, priority of the step that produced the tree)
    type Key = (Vec<SafraNode>, u32);

    fn initial(&self) -> Self::Key {
        let mut label = Vec::new();
        self.guesses(self.source.initial(), &mut label);
        (vec![SafraNode { parent: u32::MAX, label }], QUIET + 1)
    }

    fn active(&self, k: &Self::Key) -> Vec<AState> {
        let mut v: Vec<AState> = k.0.first().map(|n| n.label.iter().map(|e| e.0).collect()).unwrap_or_default();
        v.dedup();
        v
    }

    fn step(&self, k: &Self::Key, succ: &dyn Fn(AState) -> Vec<AState>) -> Self::Key {
        let mut nodes = k.0.clone();
        // spawn a youngest child holding the accepting part of every label
        let m = nodes.len();
        for i in 0..m {
            let acc: Vec<(AState, u32)> = nodes[i].label.iter().copied().filter(|&e| self.buchi_accepting(e)).collect();
            if !acc.is_empty() {
                nodes.push(SafraNode {
                    parent: i as u32,
                    label: acc,
                });
            }
        }
        for n in nodes.iter_mut() {
            n.label = self.advance(&n.label, succ);
        }
        let n = nodes.len();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, node) in nodes.iter().enumerate().skip(1) {
            children[node.parent as usize].push(i);
        }
        // horizontal merge: a detector state stays only in the oldest branch
        if n > 0 {
            let mut stack: Vec<(usize, Vec<(AState, u32)>)> = vec![(0, Vec::new())];
            while let Some((v, blocked)) = stack.pop() {
                nodes[v].label.retain(|e| blocked.binary_search(e).is_err());
                let mut b = blocked;
                let mut pending = Vec::new();
                for &c in &children[v] {
                    pending.push((c, b.clone()));
                    b.extend(nodes[c].label.iter().copied());
                    b.sort_unstable();
                    b.dedup();
                }
                stack.extend(pending.into_iter().rev());
            }
        }
        let mut alive: Vec<bool> = nodes.iter().map(|nd| !nd.label.is_empty()).collect();
        let mut event = QUIET;
        if let Some(v) = alive.iter().position(|a| !a) {
            event = event.min(2 * v as u32 + 1);
        }
        // descendants of dead nodes are dead too
        for v in 1..n {
            if !alive[nodes[v].parent as usize] {
                alive[v] = false;
            }
        }
        // vertical merge: a node covered by its children turns green and
        // loses its subtree
        for v in 0..n {
            if !alive[v] {
                continue;
            }
            let kids: Vec<usize> = children[v].iter().copied().filter(|&c| alive[c]).collect();
            if kids.is_empty() {
                continue;
            }
            let covered: usize = kids.iter().map(|&c| nodes[c].label.len()).sum();
            if covered == nodes[v].label.len() {
                event = event.min(2 * v as u32);
                let mut stack = kids;
                while let Some(w) = stack.pop() {
                    if alive[w] {
                        alive[w] = false;
                        event = event.min(2 * w as u32 + 1);
                        stack.extend(children[w].iter().copied());
                    }
                }
            }
        }
        let mut rename = vec![u32::MAX; n];
        let mut out = Vec::new();
        for v in 0..n {
            if alive[v] {
                rename[v] = out.len() as u32;
                let parent = if v == 0 { u32::MAX } else { rename[nodes[v].parent as usize] };
                out.push(SafraNode {
                    parent,
                    label: std::mem::take(&mut nodes[v].label),
                });
            }
        }
        (out, event + 1)
    }

    fn priority(&self, k: &Self::Key) -> u32 {
        k.1
    }

    fn kind(&self) -> AcceptanceKind {
        AcceptanceKind::Parity
    }

    fn describe(&self, k: &Self::Key) -> String {
        let parts: Vec<String> = k
            .0
            .iter()
            .map(|n| {
                let l: Vec<String> = n
                    .label
                    .iter()
                    .map(|&(q, j)| if j == FREE { format!("{q}") } else { format!("{q}@{j}") })
                    .collect();
                format!("{}<{}>", n.parent as i64, l.join(","))
            })
            .collect();
        format!("[{}] p{}", parts.join(" "), k.1)
    }
}
