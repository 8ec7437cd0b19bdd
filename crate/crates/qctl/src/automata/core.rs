use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;
use std::rc::Rc;

use super::{AState, Alphabet, Letter, Pbf};

/// How much of the parity condition an automaton really uses. Drives the
/// choice of alternation-removal construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AcceptanceKind {
    /// Every cycle of the state graph stays within states of one priority
    /// parity.
    Weak,
    /// Accepting iff an even-priority state recurs; priorities in use are
    /// 0 and 1 inside any cycle.
    Buchi,
    /// Arbitrary min-parity condition.
    Parity,
}

/// Caps guarding the constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// States materialized by one lazy automaton.
    pub max_states: usize,
    /// Minimal models of one transition formula.
    pub max_models: usize,
    /// Disjuncts of one nondeterministic transition.
    pub max_choices: usize,
    /// Positions of one game.
    pub max_positions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 1_000_000,
            max_models: 20_000,
            max_choices: 200_000,
            max_positions: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("automaton blow-up: {what} exceeded the cap of {cap}")]
    Blowup { what: String, cap: usize },
    #[error("not a nondeterministic automaton: {0}")]
    Shape(String),
    #[error("degree {0} is outside the automaton's degree set")]
    Degree(usize),
    #[error("formula is not a negation-normal-form CTL formula: {0}")]
    NotCtl(String),
    #[error("automata disagree on {0}")]
    Mismatch(&'static str),
    #[error("proposition universe exceeds {0} propositions")]
    AlphabetTooLarge(usize),
}

pub(crate) fn blowup(what: impl Into<String>, cap: usize) -> AutomatonError {
    AutomatonError::Blowup { what: what.into(), cap }
}

/// An alternating parity tree automaton with states discovered on demand.
/// State ids are dense from 0 in discovery order.
pub trait TreeAutomaton {
    fn initial(&self) -> AState;
    /// `τ_d(q, σ)`; directions in the result are below `degree`.
    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError>;
    fn priority(&self, q: AState) -> u32;
    fn kind(&self) -> AcceptanceKind;
    /// Number of states created so far.
    fn discovered(&self) -> usize;
    fn describe(&self, q: AState) -> String {
        format!("q{q}")
    }
}

/// A tree automaton whose transitions are disjunctions of full tuples: one
/// successor state per direction.
pub trait NondetAutomaton: TreeAutomaton {
    fn choices(&self, q: AState, letter: Letter, degree: usize) -> Result<Rc<[Vec<AState>]>, AutomatonError>;
}

/// `⋁_i ⋀_c (c, t_i[c])`.
pub fn pbf_of_choices(choices: &[Vec<AState>]) -> Pbf {
    Pbf::disj(
        choices
            .iter()
            .map(|t| Pbf::conj(t.iter().enumerate().map(|(c, &q)| Pbf::atom(c, q)))),
    )
}

/// Reads a transition as a disjunction of full tuples, if it has that shape.
pub fn choices_of_pbf(f: &Pbf, degree: usize) -> Option<Vec<Vec<AState>>> {
    let tuple = |g: &Pbf| -> Option<Vec<AState>> {
        let atoms: Vec<&Pbf> = match g {
            Pbf::And(xs) => xs.iter().collect(),
            a @ Pbf::Atom(..) => vec![a],
            _ => return None,
        };
        if atoms.len() != degree {
            return None;
        }
        let mut t = vec![usize::MAX; degree];
        for a in atoms {
            let Pbf::Atom(c, q) = a else { return None };
            if *c >= degree || t[*c] != usize::MAX {
                return None;
            }
            t[*c] = *q;
        }
        Some(t)
    };
    match f {
        Pbf::False => Some(Vec::new()),
        Pbf::Or(xs) => xs.iter().map(tuple).collect(),
        g => tuple(g).map(|t| vec![t]),
    }
}

/// Alternating parity tree automaton over an alphabet, for a degree set.
#[derive(Clone)]
pub struct Apta {
    pub(crate) aut: Rc<dyn TreeAutomaton>,
    alphabet: Alphabet,
    degrees: Rc<[usize]>,
}

/// Nondeterministic parity tree automaton.
#[derive(Clone)]
pub struct Npta {
    pub(crate) aut: Rc<dyn NondetAutomaton>,
    alphabet: Alphabet,
    degrees: Rc<[usize]>,
}

fn normalize_degrees(degrees: &[usize]) -> Rc<[usize]> {
    let mut d: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    d.sort_unstable();
    d.dedup();
    d.into()
}

impl Apta {
    pub fn new(aut: Rc<dyn TreeAutomaton>, alphabet: Alphabet, degrees: &[usize]) -> Apta {
        Apta {
            aut,
            alphabet,
            degrees: normalize_degrees(degrees),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn initial(&self) -> AState {
        self.aut.initial()
    }

    pub fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        if !self.degrees.contains(&degree) {
            return Err(AutomatonError::Degree(degree));
        }
        self.aut.transition(q, letter, degree)
    }

    pub fn priority(&self, q: AState) -> u32 {
        self.aut.priority(q)
    }

    pub fn kind(&self) -> AcceptanceKind {
        self.aut.kind()
    }

    pub fn discovered(&self) -> usize {
        self.aut.discovered()
    }

    pub fn describe(&self, q: AState) -> String {
        self.aut.describe(q)
    }

    pub(crate) fn with_inner(&self, aut: Rc<dyn TreeAutomaton>) -> Apta {
        Apta {
            aut,
            alphabet: self.alphabet.clone(),
            degrees: self.degrees.clone(),
        }
    }

    /// Explores every state reachable over all letters and degrees.
    pub fn materialize(&self, max_states: usize) -> Result<Explicit, AutomatonError> {
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        self.materialize_on(&letters, max_states)
    }

    /// As [`Apta::materialize`], reading only the given letters.
    pub fn materialize_on(&self, letters: &[Letter], max_states: usize) -> Result<Explicit, AutomatonError> {
        let mut trans = BTreeMap::new();
        let mut seen = vec![self.initial()];
        let mut index: HashMap<AState, usize> = HashMap::from([(self.initial(), 0)]);
        let mut queue = VecDeque::from([self.initial()]);
        while let Some(q) = queue.pop_front() {
            for &d in self.degrees.iter() {
                for &letter in letters {
                    let f = self.transition(q, letter, d)?;
                    let mut atoms = Vec::new();
                    f.atoms(&mut atoms);
                    for (_, r) in atoms {
                        if let std::collections::hash_map::Entry::Vacant(e) = index.entry(r) {
                            if seen.len() >= max_states {
                                return Err(blowup("materialized states", max_states));
                            }
                            e.insert(seen.len());
                            seen.push(r);
                            queue.push_back(r);
                        }
                    }
                    trans.insert((index[&q], d, letter), f);
                }
            }
        }
        let renumber = |f: &Pbf| f.map_states(&mut |r| index[&r]);
        Ok(Explicit {
            alphabet: self.alphabet.clone(),
            degrees: self.degrees.to_vec(),
            names: seen.iter().map(|&q| self.describe(q)).collect(),
            priorities: seen.iter().map(|&q| self.priority(q)).collect(),
            trans: trans.iter().map(|(k, f)| (*k, renumber(f))).collect(),
            kind: self.kind(),
        })
    }
}

impl Npta {
    pub fn new(aut: Rc<dyn NondetAutomaton>, alphabet: Alphabet, degrees: &[usize]) -> Npta {
        Npta {
            aut,
            alphabet,
            degrees: normalize_degrees(degrees),
        }
    }

    /// Accepts an alternating automaton whose reachable transitions all have
    /// the nondeterministic shape.
    pub fn from_apta(a: &Apta, max_states: usize) -> Result<Npta, AutomatonError> {
        let e = a.materialize(max_states)?;
        for ((q, d, letter), f) in &e.trans {
            if choices_of_pbf(f, *d).is_none() {
                return Err(AutomatonError::Shape(format!(
                    "transition of state {} on {} at degree {d} is {f}",
                    e.names[*q],
                    e.alphabet.show(*letter)
                )));
            }
        }
        let (alphabet, degrees) = (e.alphabet.clone(), e.degrees.clone());
        Ok(Npta::new(Rc::new(e), alphabet, &degrees))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn initial(&self) -> AState {
        self.aut.initial()
    }

    pub fn priority(&self, q: AState) -> u32 {
        self.aut.priority(q)
    }

    pub fn choices(&self, q: AState, letter: Letter, degree: usize) -> Result<Rc<[Vec<AState>]>, AutomatonError> {
        if !self.degrees.contains(&degree) {
            return Err(AutomatonError::Degree(degree));
        }
        self.aut.choices(q, letter, degree)
    }

    pub fn discovered(&self) -> usize {
        self.aut.discovered()
    }

    pub fn as_apta(&self) -> Apta {
        let aut: Rc<dyn TreeAutomaton> = self.aut.clone();
        Apta::new(aut, self.alphabet.clone(), &self.degrees)
    }
}

/// A fully materialized automaton. Missing transitions are `false`.
#[derive(Clone, Debug)]
pub struct Explicit {
    pub alphabet: Alphabet,
    pub degrees: Vec<usize>,
    pub names: Vec<String>,
    pub priorities: Vec<u32>,
    pub trans: BTreeMap<(AState, usize, Letter), Pbf>,
    pub kind: AcceptanceKind,
}

impl Explicit {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of distinct priorities.
    pub fn index(&self) -> usize {
        let mut p = self.priorities.clone();
        p.sort_unstable();
        p.dedup();
        p.len()
    }

    /// Text dump: `state q prio k` lines, then `trans d q sigma := pbf`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (q, name) in self.names.iter().enumerate() {
            let _ = writeln!(out, "state {q} prio {} # {name}", self.priorities[q]);
        }
        for ((q, d, letter), f) in &self.trans {
            let _ = writeln!(out, "trans {d} {q} {} := {f}", self.alphabet.show(*letter));
        }
        out
    }

    /// DOT: one node per state annotated with its priority, one edge per
    /// atom labelled by degree and letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for (q, name) in self.names.iter().enumerate() {
            let shape = if q == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(
                out,
                "  s{q} [shape={shape}, label=\"{}\\nprio {}\"];",
                name.replace('"', "\\\""),
                self.priorities[q]
            );
        }
        let mut edges: BTreeMap<(AState, AState, usize), Vec<String>> = BTreeMap::new();
        for ((q, d, letter), f) in &self.trans {
            let mut atoms = Vec::new();
            f.atoms(&mut atoms);
            atoms.sort_unstable();
            atoms.dedup();
            for (c, r) in atoms {
                edges
                    .entry((*q, r, c))
                    .or_default()
                    .push(format!("d{d} {}", self.alphabet.show(*letter)));
            }
        }
        for ((q, r, c), labels) in edges {
            let _ = writeln!(out, "  s{q} -> s{r} [label=\"dir {c}: {}\"];", labels.join(" "));
        }
        out.push_str("}\n");
        out
    }
}

impl TreeAutomaton for Explicit {
    fn initial(&self) -> AState {
        0
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        Ok(self.trans.get(&(q, degree, letter)).cloned().unwrap_or(Pbf::False))
    }

    fn priority(&self, q: AState) -> u32 {
        self.priorities[q]
    }

    fn kind(&self) -> AcceptanceKind {
        self.kind
    }

    fn discovered(&self) -> usize {
        self.names.len()
    }

    fn describe(&self, q: AState) -> String {
        self.names[q].clone()
    }
}

impl NondetAutomaton for Explicit {
    fn choices(&self, q: AState, letter: Letter, degree: usize) -> Result<Rc<[Vec<AState>]>, AutomatonError> {
        let f = self.transition(q, letter, degree)?;
        choices_of_pbf(&f, degree)
            .map(Into::into)
            .ok_or_else(|| AutomatonError::Shape(f.to_string()))
    }
}

/// One state accepting every tree.
pub fn accept_all(alphabet: Alphabet, degrees: &[usize]) -> Apta {
    constant(alphabet, degrees, true)
}

/// One state rejecting every tree.
pub fn reject_all(alphabet: Alphabet, degrees: &[usize]) -> Apta {
    constant(alphabet, degrees, false)
}

fn constant(alphabet: Alphabet, degrees: &[usize], accept: bool) -> Apta {
    let degrees = normalize_degrees(degrees);
    let f = if accept { Pbf::True } else { Pbf::False };
    let trans = degrees
        .iter()
        .flat_map(|&d| alphabet.letters().map(move |l| (0, d, l)))
        .map(|k| (k, f.clone()))
        .collect();
    let e = Explicit {
        alphabet: alphabet.clone(),
        degrees: degrees.to_vec(),
        names: vec![if accept { "accept" } else { "reject" }.to_string()],
        priorities: vec![if accept { 0 } else { 1 }],
        trans,
        kind: AcceptanceKind::Weak,
    };
    Apta::new(Rc::new(e), alphabet, &degrees)
}

/// The dual automaton: same states, dualized transitions, priorities
/// shifted by one. It accepts exactly the trees the input rejects.
pub fn dual(a: &Apta) -> Apta {
    a.with_inner(Rc::new(Dual { inner: a.aut.clone() }))
}

struct Dual {
    inner: Rc<dyn TreeAutomaton>,
}

impl TreeAutomaton for Dual {
    fn initial(&self) -> AState {
        self.inner.initial()
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        Ok(self.inner.transition(q, letter, degree)?.dual())
    }

    fn priority(&self, q: AState) -> u32 {
        self.inner.priority(q) + 1
    }

    fn kind(&self) -> AcceptanceKind {
        match self.inner.kind() {
            AcceptanceKind::Weak => AcceptanceKind::Weak,
            _ => AcceptanceKind::Parity,
        }
    }

    fn discovered(&self) -> usize {
        self.inner.discovered()
    }

    fn describe(&self, q: AState) -> String {
        format!("~{}", self.inner.describe(q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    And,
    Or,
}

/// Intersection or union: a fresh initial state whose transition combines
/// both initial transitions.
pub fn combine(a: &Apta, b: &Apta, op: BoolOp) -> Result<Apta, AutomatonError> {
    if a.degrees() != b.degrees() {
        return Err(AutomatonError::Mismatch("degree sets"));
    }
    if a.alphabet() != b.alphabet() {
        return Err(AutomatonError::Mismatch("alphabets"));
    }
    let kind = a.kind().max(b.kind());
    Ok(a.with_inner(Rc::new(Combined {
        parts: [a.aut.clone(), b.aut.clone()],
        op,
        kind,
    })))
}

/// State 0 is the fresh initial state; state `2i + 1 + k` is state `i` of
/// part `k`.
struct Combined {
    parts: [Rc<dyn TreeAutomaton>; 2],
    op: BoolOp,
    kind: AcceptanceKind,
}

impl TreeAutomaton for Combined {
    fn initial(&self) -> AState {
        0
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        let lift = |k: usize, f: Pbf| f.map_states(&mut |r| 2 * r + 1 + k);
        if q == 0 {
            let fs = (0..2)
                .map(|k| {
                    let p = &self.parts[k];
                    Ok(lift(k, p.transition(p.initial(), letter, degree)?))
                })
                .collect::<Result<Vec<_>, AutomatonError>>()?;
            return Ok(match self.op {
                BoolOp::And => Pbf::conj(fs),
                BoolOp::Or => Pbf::disj(fs),
            });
        }
        let k = (q - 1) % 2;
        Ok(lift(k, self.parts[k].transition((q - 1) / 2, letter, degree)?))
    }

    fn priority(&self, q: AState) -> u32 {
        if q == 0 {
            return 0;
        }
        self.parts[(q - 1) % 2].priority((q - 1) / 2)
    }

    fn kind(&self) -> AcceptanceKind {
        self.kind
    }

    fn discovered(&self) -> usize {
        1 + self.parts[0].discovered() + self.parts[1].discovered()
    }

    fn describe(&self, q: AState) -> String {
        if q == 0 {
            return format!("{:?}", self.op);
        }
        let k = (q - 1) % 2;
        format!("{}:{}", k, self.parts[k].describe((q - 1) / 2))
    }
}

/// Dense interning of lazily created states.
pub(crate) struct Interner<K> {
    pub(crate) keys: Vec<K>,
    ids: HashMap<K, AState>,
}

impl<K: Clone + Eq + std::hash::Hash> Interner<K> {
    pub(crate) fn new() -> Self {
        Interner {
            keys: Vec::new(),
            ids: HashMap::new(),
        }
    }

    pub(crate) fn intern(&mut self, k: K, cap: usize) -> Result<AState, AutomatonError> {
        if let Some(&id) = self.ids.get(&k) {
            return Ok(id);
        }
        if self.keys.len() >= cap {
            return Err(blowup("automaton states", cap));
        }
        let id = self.keys.len();
        self.keys.push(k.clone());
        self.ids.insert(k, id);
        Ok(id)
    }

    pub(crate) fn len(&self) -> usize {
        self.keys.len()
    }
}

/// Memo table for transitions of lazy automata.
pub(crate) type TransCache<V> = RefCell<HashMap<(AState, Letter, usize), V>>;
