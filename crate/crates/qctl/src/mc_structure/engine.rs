use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::StateSet;
use crate::kripke::{Kripke, StateId};
use crate::logic::{Formula, NotQctl, Prop, Quant, Temporal};

/// A labelling of some propositions, used as a hint for quantifier blocks.
pub type Labelling = BTreeMap<Prop, StateSet>;

/// How hinted labellings interact with exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HintMode {
    /// Try hints first, then enumerate if they did not settle the block.
    Prefer,
    /// Only evaluate hinted labellings for blocks they cover. Sound for
    /// positive verdicts of existential blocks only.
    Only,
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    /// Largest number of labellings enumerated for a single quantifier block.
    pub enumeration_cap: u64,
    pub hints: Vec<Labelling>,
    pub hint_mode: HintMode,
    pub memoize: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            enumeration_cap: 1 << 24,
            hints: Vec::new(),
            hint_mode: HintMode::Prefer,
            memoize: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    #[error("enumeration budget exceeded: a quantifier block needs 2^{bits} labellings, cap is {cap}")]
    Budget { bits: usize, cap: u64 },
    #[error(transparent)]
    NotQctl(#[from] NotQctl),
}

type Id = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Prop(Prop),
    Not(Id),
    And(Id, Id),
    Or(Id, Id),
    Ex(Id),
    Ax(Id),
    Eu(Id, Id),
    Au(Id, Id),
    Ew(Id, Id),
    Aw(Id, Id),
    Exists(Vec<Prop>, Id),
    Forall(Vec<Prop>, Id),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    ids: HashMap<Node, Id>,
    free: Vec<BTreeSet<Prop>>,
}

impl Arena {
    fn intern(&mut self, n: Node) -> Id {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let free = match &n {
            Node::True | Node::False => BTreeSet::new(),
            Node::Prop(p) => [*p].into(),
            Node::Not(a) | Node::Ex(a) | Node::Ax(a) => self.free[*a].clone(),
            Node::And(a, b) | Node::Or(a, b) | Node::Eu(a, b) | Node::Au(a, b) | Node::Ew(a, b) | Node::Aw(a, b) => {
                self.free[*a].union(&self.free[*b]).copied().collect()
            }
            Node::Exists(ps, a) | Node::Forall(ps, a) => {
                self.free[*a].iter().filter(|p| !ps.contains(p)).copied().collect()
            }
        };
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.free.push(free);
        self.ids.insert(n, id);
        id
    }

    fn add(&mut self, f: &Formula) -> Result<Id, NotQctl> {
        Ok(match f {
            Formula::True => self.intern(Node::True),
            Formula::False => self.intern(Node::False),
            Formula::Prop(p) => self.intern(Node::Prop(*p)),
            Formula::Not(a) => {
                let a = self.add(a)?;
                self.intern(Node::Not(a))
            }
            Formula::And(a, b) => {
                let (a, b) = (self.add(a)?, self.add(b)?);
                self.intern(Node::And(a, b))
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.add(a)?, self.add(b)?);
                self.intern(Node::Or(a, b))
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.add(a)?, self.add(b)?);
                let na = self.intern(Node::Not(a));
                self.intern(Node::Or(na, b))
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.add(a)?, self.add(b)?);
                let both = self.intern(Node::And(a, b));
                let (na, nb) = (self.intern(Node::Not(a)), self.intern(Node::Not(b)));
                let neither = self.intern(Node::And(na, nb));
                self.intern(Node::Or(both, neither))
            }
            Formula::Exists(ps, a) => {
                let a = self.add(a)?;
                self.intern(Node::Exists(ps.clone(), a))
            }
            Formula::Forall(ps, a) => {
                let a = self.add(a)?;
                self.intern(Node::Forall(ps.clone(), a))
            }
            Formula::Path(q, p) => {
                let t = p.as_temporal().ok_or_else(|| NotQctl(p.to_string()))?;
                let e = *q == Quant::E;
                match t {
                    Temporal::X(a) => {
                        let a = self.add(a)?;
                        self.intern(if e { Node::Ex(a) } else { Node::Ax(a) })
                    }
                    Temporal::U(a, b) => {
                        let (a, b) = (self.add(a)?, self.add(b)?);
                        self.intern(if e { Node::Eu(a, b) } else { Node::Au(a, b) })
                    }
                    Temporal::W(a, b) => {
                        let (a, b) = (self.add(a)?, self.add(b)?);
                        self.intern(if e { Node::Ew(a, b) } else { Node::Aw(a, b) })
                    }
                    Temporal::F(a) => {
                        let (t, a) = (self.intern(Node::True), self.add(a)?);
                        self.intern(if e { Node::Eu(t, a) } else { Node::Au(t, a) })
                    }
                    Temporal::G(a) => {
                        let (ff, a) = (self.intern(Node::False), self.add(a)?);
                        self.intern(if e { Node::Ew(a, ff) } else { Node::Aw(a, ff) })
                    }
                }
            }
        })
    }
}

type MemoKey = (Id, Vec<Option<StateSet>>);

struct Engine<'a> {
    s: &'a Kripke,
    n: usize,
    arena: Arena,
    /// Free propositions of a node that some quantifier of the formula binds.
    dep: Vec<Vec<Prop>>,
    constant: Vec<Option<StateSet>>,
    memo: HashMap<MemoKey, StateSet>,
    env: HashMap<Prop, StateSet>,
    base: HashMap<Prop, StateSet>,
    opts: &'a CheckOptions,
}

impl<'a> Engine<'a> {
    fn new(s: &'a Kripke, f: &Formula, opts: &'a CheckOptions) -> Result<(Self, Id), McError> {
        let mut arena = Arena::default();
        let root = arena.add(f)?;
        let bound = f.bound_props();
        let dep = arena
            .free
            .iter()
            .map(|fr| fr.iter().filter(|p| bound.contains(p)).copied().collect())
            .collect();
        let n = s.len();
        let mut base: HashMap<Prop, StateSet> = HashMap::new();
        for q in s.states() {
            for &p in s.labels(q) {
                base.entry(p).or_insert_with(|| StateSet::empty(n)).insert(q);
            }
        }
        let constant = vec![None; arena.nodes.len()];
        Ok((
            Engine {
                s,
                n,
                arena,
                dep,
                constant,
                memo: HashMap::new(),
                env: HashMap::new(),
                base,
                opts,
            },
            root,
        ))
    }

    fn pre_exists(&self, z: &StateSet) -> StateSet {
        StateSet::from_fn(self.n, |q| self.s.succ(q).iter().any(|&t| z.contains(t)))
    }

    fn pre_all(&self, z: &StateSet) -> StateSet {
        StateSet::from_fn(self.n, |q| self.s.succ(q).iter().all(|&t| z.contains(t)))
    }

    /// Fixpoint of `Z = b ∪ (a ∩ pre(Z))`, least when `least`, greatest otherwise.
    fn until(&self, a: &StateSet, b: &StateSet, existential: bool, least: bool) -> StateSet {
        let mut z = if least { b.clone() } else { StateSet::full(self.n) };
        loop {
            let pre = if existential { self.pre_exists(&z) } else { self.pre_all(&z) };
            let next = b.union(&a.intersection(&pre));
            if next == z {
                return z;
            }
            z = next;
        }
    }

    fn eval(&mut self, id: Id) -> Result<StateSet, McError> {
        let is_constant = self.dep[id].is_empty();
        if is_constant {
            if let Some(c) = &self.constant[id] {
                return Ok(c.clone());
            }
        }
        let node = self.arena.nodes[id].clone();
        let r = match node {
            Node::True => StateSet::full(self.n),
            Node::False => StateSet::empty(self.n),
            Node::Prop(p) => match self.env.get(&p) {
                Some(set) => set.clone(),
                None => self.base.get(&p).cloned().unwrap_or_else(|| StateSet::empty(self.n)),
            },
            Node::Not(a) => self.eval(a)?.complement(),
            Node::And(a, b) => {
                let x = self.eval(a)?;
                if x.is_empty() {
                    x
                } else {
                    x.intersection(&self.eval(b)?)
                }
            }
            Node::Or(a, b) => {
                let x = self.eval(a)?;
                if x.is_full() {
                    x
                } else {
                    x.union(&self.eval(b)?)
                }
            }
            Node::Ex(a) => {
                let x = self.eval(a)?;
                self.pre_exists(&x)
            }
            Node::Ax(a) => {
                let x = self.eval(a)?;
                self.pre_all(&x)
            }
            Node::Eu(a, b) | Node::Au(a, b) | Node::Ew(a, b) | Node::Aw(a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let existential = matches!(node, Node::Eu(..) | Node::Ew(..));
                let least = matches!(node, Node::Eu(..) | Node::Au(..));
                self.until(&x, &y, existential, least)
            }
            Node::Exists(ref ps, body) | Node::Forall(ref ps, body) => {
                let existential = matches!(node, Node::Exists(..));
                let key = self.opts.memoize.then(|| self.memo_key(id));
                if let Some(k) = &key {
                    if let Some(r) = self.memo.get(k) {
                        return Ok(r.clone());
                    }
                }
                let r = self.quantify(ps, body, existential, None)?.0;
                if let Some(k) = key {
                    self.memo.insert(k, r.clone());
                }
                r
            }
        };
        if is_constant {
            self.constant[id] = Some(r.clone());
        }
        Ok(r)
    }

    fn memo_key(&self, id: Id) -> MemoKey {
        (id, self.dep[id].iter().map(|p| self.env.get(p).cloned()).collect())
    }

    /// Truth at a single state, with short-circuiting through booleans and
    /// quantifier blocks.
    fn eval_at(&mut self, id: Id, q: StateId) -> Result<bool, McError> {
        match self.arena.nodes[id].clone() {
            Node::Not(a) => Ok(!self.eval_at(a, q)?),
            Node::And(a, b) => Ok(self.eval_at(a, q)? && self.eval_at(b, q)?),
            Node::Or(a, b) => Ok(self.eval_at(a, q)? || self.eval_at(b, q)?),
            Node::Exists(ps, body) => Ok(self.quantify(&ps, body, true, Some(q))?.1),
            Node::Forall(ps, body) => Ok(self.quantify(&ps, body, false, Some(q))?.1),
            _ => Ok(self.eval(id)?.contains(q)),
        }
    }

    /// Enumerates labellings of `ps` for `body`. Returns the union
    /// (existential) or intersection (universal) of the satisfaction sets seen,
    /// and, in target mode, the verdict at the target. In target mode the set
    /// is only meaningful at the target.
    fn quantify(
        &mut self,
        ps: &[Prop],
        body: Id,
        existential: bool,
        target: Option<StateId>,
    ) -> Result<(StateSet, bool), McError> {
        let saved: Vec<(Prop, Option<StateSet>)> = ps.iter().map(|&p| (p, self.env.remove(&p))).collect();
        let result = self.quantify_inner(ps, body, existential, target);
        for (p, old) in saved {
            match old {
                Some(set) => {
                    self.env.insert(p, set);
                }
                None => {
                    self.env.remove(&p);
                }
            }
        }
        result
    }

    fn quantify_inner(
        &mut self,
        ps: &[Prop],
        body: Id,
        existential: bool,
        target: Option<StateId>,
    ) -> Result<(StateSet, bool), McError> {
        let n = self.n;
        let mut acc = if existential { StateSet::empty(n) } else { StateSet::full(n) };
        let mut verdict = !existential;
        let opts = self.opts;
        let hinted: Vec<&Labelling> = opts
            .hints
            .iter()
            .filter(|h| ps.iter().all(|p| h.contains_key(p)))
            .collect();

        // Evaluates one labelling; returns true once the block is decided.
        let step = |engine: &mut Self, acc: &mut StateSet, verdict: &mut bool| -> Result<bool, McError> {
            match target {
                Some(q) => {
                    let v = engine.eval_at(body, q)?;
                    if v == existential {
                        *verdict = existential;
                        return Ok(true);
                    }
                    Ok(false)
                }
                None => {
                    let r = engine.eval(body)?;
                    if existential {
                        acc.union_with(&r);
                        Ok(acc.is_full())
                    } else {
                        acc.intersect_with(&r);
                        Ok(acc.is_empty())
                    }
                }
            }
        };

        for h in &hinted {
            for &p in ps {
                self.env.insert(p, h[&p].clone());
            }
            if step(self, &mut acc, &mut verdict)? {
                return Ok((acc, verdict));
            }
        }
        if !hinted.is_empty() && opts.hint_mode == HintMode::Only {
            return Ok((acc, verdict));
        }

        let m = ps.len();
        let bits = n * m;
        if bits >= 63 || (1u64 << bits) > opts.enumeration_cap {
            return Err(McError::Budget {
                bits,
                cap: opts.enumeration_cap,
            });
        }
        for counter in 0..(1u64 << bits) {
            for (k, &p) in ps.iter().enumerate() {
                let set = StateSet::from_fn(n, |j| counter >> (j * m + k) & 1 == 1);
                self.env.insert(p, set);
            }
            if step(self, &mut acc, &mut verdict)? {
                break;
            }
        }
        Ok((acc, verdict))
    }
}

/// All states satisfying `f` under the structure semantics.
pub fn sat_set(s: &Kripke, f: &Formula, opts: &CheckOptions) -> Result<StateSet, McError> {
    let (mut engine, root) = Engine::new(s, f, opts)?;
    engine.eval(root)
}

/// Truth of `f` at `q` under the structure semantics. Top-level boolean
/// structure and quantifier prefixes are evaluated at `q` only, so prefix
/// enumeration stops as soon as the verdict at `q` is known.
pub fn check(s: &Kripke, q: StateId, f: &Formula, opts: &CheckOptions) -> Result<bool, McError> {
    let (mut engine, root) = Engine::new(s, f, opts)?;
    engine.eval_at(root, q)
}

/// Converts labels given by state name into a hint.
pub fn labelling_from_names<'n>(
    s: &Kripke,
    entries: impl IntoIterator<Item = (&'n str, Prop)>,
) -> Result<Labelling, String> {
    let mut out = Labelling::new();
    for (name, p) in entries {
        let q = s.state_id(name).ok_or_else(|| format!("unknown state `{name}`"))?;
        out.entry(p).or_insert_with(|| StateSet::empty(s.len())).insert(q);
    }
    Ok(out)
}
