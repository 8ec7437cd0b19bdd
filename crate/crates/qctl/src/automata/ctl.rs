use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::core::{AcceptanceKind, Interner};
use super::{AState, Alphabet, Apta, AutomatonError, Letter, Pbf, TreeAutomaton};
use crate::logic::{Formula, Quant, Temporal};

/// Priority of existential and universal until states.
pub const UNTIL_PRIORITY: u32 = 1;
/// Priority of weak until states, and of states never on a cycle.
pub const WEAK_PRIORITY: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(Option<u32>, bool),
    And(usize, usize),
    Or(usize, usize),
    Next(Quant, usize),
    Until(Quant, usize, usize),
    WeakUntil(Quant, usize, usize),
    Plug(usize),
}

/// Automaton for a CTL formula in negation normal form. Each state is a
/// state subformula; boolean states are expanded inline in transitions.
pub fn ctl_to_apta(f: &Formula, alphabet: Alphabet, degrees: &[usize]) -> Result<Apta, AutomatonError> {
    ctl_with_plugs(f, alphabet, degrees, &mut |g| Err(AutomatonError::NotCtl(g.to_string())))
}

/// As [`ctl_to_apta`], where quantified subformulas (and their negations)
/// are opaque: `plug` supplies an automaton for each, whose initial
/// transition is used in place of the subformula.
pub fn ctl_with_plugs(
    f: &Formula,
    alphabet: Alphabet,
    degrees: &[usize],
    plug: &mut dyn FnMut(&Formula) -> Result<Apta, AutomatonError>,
) -> Result<Apta, AutomatonError> {
    let mut b = Builder {
        nodes: Vec::new(),
        ids: HashMap::new(),
        names: Vec::new(),
        plugs: Vec::new(),
        alphabet: &alphabet,
        plug,
    };
    let root = b.build(f)?;
    let kind = b
        .plugs
        .iter()
        .map(|p: &Apta| p.kind())
        .fold(AcceptanceKind::Weak, AcceptanceKind::max);
    let ctx = Context {
        nodes: b.nodes,
        names: b.names,
        root,
        plugs: b.plugs.iter().map(|p| p.aut.clone()).collect(),
        plug_states: RefCell::new(Interner::new()),
        kind,
    };
    Ok(Apta::new(Rc::new(ctx), alphabet, degrees))
}

struct Builder<'a> {
    nodes: Vec<Node>,
    ids: HashMap<Node, usize>,
    names: Vec<String>,
    plugs: Vec<Apta>,
    alphabet: &'a Alphabet,
    plug: &'a mut dyn FnMut(&Formula) -> Result<Apta, AutomatonError>,
}

impl Builder<'_> {
    fn node(&mut self, n: Node, name: String) -> usize {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        self.nodes.push(n.clone());
        self.names.push(name);
        self.ids.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn build(&mut self, f: &Formula) -> Result<usize, AutomatonError> {
        use Formula as F;
        let name = f.to_string();
        let n = match f {
            F::True => Node::True,
            F::False => Node::False,
            F::Prop(p) => Node::Lit(self.alphabet.bit(*p), true),
            F::Not(g) => match &**g {
                F::Prop(p) => Node::Lit(self.alphabet.bit(*p), false),
                F::Exists(..) | F::Forall(..) => self.plug_node(f)?,
                _ => return Err(AutomatonError::NotCtl(name)),
            },
            F::And(a, b) => Node::And(self.build(a)?, self.build(b)?),
            F::Or(a, b) => Node::Or(self.build(a)?, self.build(b)?),
            F::Exists(..) | F::Forall(..) => self.plug_node(f)?,
            F::Implies(..) | F::Iff(..) => return Err(AutomatonError::NotCtl(name)),
            F::Path(q, p) => {
                let t = p.as_temporal().ok_or_else(|| AutomatonError::NotCtl(name.clone()))?;
                match t {
                    Temporal::X(a) => Node::Next(*q, self.build(a)?),
                    Temporal::U(a, b) => Node::Until(*q, self.build(a)?, self.build(b)?),
                    Temporal::W(a, b) => Node::WeakUntil(*q, self.build(a)?, self.build(b)?),
                    Temporal::F(a) => {
                        let t = self.node(Node::True, "true".into());
                        Node::Until(*q, t, self.build(a)?)
                    }
                    Temporal::G(a) => {
                        let ff = self.node(Node::False, "false".into());
                        Node::WeakUntil(*q, self.build(a)?, ff)
                    }
                }
            }
        };
        Ok(self.node(n, name))
    }

    fn plug_node(&mut self, f: &Formula) -> Result<Node, AutomatonError> {
        let a = (self.plug)(f)?;
        self.plugs.push(a);
        Ok(Node::Plug(self.plugs.len() - 1))
    }
}

/// States `0..nodes.len()` are subformulas; later ids are plug states.
struct Context {
    nodes: Vec<Node>,
    names: Vec<String>,
    root: usize,
    plugs: Vec<Rc<dyn TreeAutomaton>>,
    plug_states: RefCell<Interner<(usize, AState)>>,
    kind: AcceptanceKind,
}

impl Context {
    fn lift(&self, k: usize, f: &Pbf) -> Result<Pbf, AutomatonError> {
        let mut err = None;
        let m = self.nodes.len();
        let g = f.map_states(&mut |r| {
            match self.plug_states.borrow_mut().intern((k, r), usize::MAX) {
                Ok(id) => m + id,
                Err(e) => {
                    err = Some(e);
                    0
                }
            }
        });
        err.map_or(Ok(g), Err)
    }

    fn local(&self, n: usize, letter: Letter, d: usize) -> Result<Pbf, AutomatonError> {
        let any = |q: usize| Pbf::disj((0..d).map(|c| Pbf::atom(c, q)));
        let all = |q: usize| Pbf::conj((0..d).map(|c| Pbf::atom(c, q)));
        let step = |quant: Quant, q: usize| match quant {
            Quant::E => any(q),
            Quant::A => all(q),
        };
        Ok(match &self.nodes[n] {
            Node::True => Pbf::True,
            Node::False => Pbf::False,
            Node::Lit(bit, positive) => {
                let holds = bit.is_some_and(|b| letter >> b & 1 == 1);
                if holds == *positive {
                    Pbf::True
                } else {
                    Pbf::False
                }
            }
            Node::And(a, b) => Pbf::and(self.local(*a, letter, d)?, self.local(*b, letter, d)?),
            Node::Or(a, b) => Pbf::or(self.local(*a, letter, d)?, self.local(*b, letter, d)?),
            Node::Next(q, a) => step(*q, *a),
            Node::Until(q, a, b) | Node::WeakUntil(q, a, b) => Pbf::or(
                self.local(*b, letter, d)?,
                Pbf::and(self.local(*a, letter, d)?, step(*q, n)),
            ),
            Node::Plug(k) => {
                let p = &self.plugs[*k];
                self.lift(*k, &p.transition(p.initial(), letter, d)?)?
            }
        })
    }
}

impl TreeAutomaton for Context {
    fn initial(&self) -> AState {
        self.root
    }

    fn transition(&self, q: AState, letter: Letter, degree: usize) -> Result<Pbf, AutomatonError> {
        if q < self.nodes.len() {
            return self.local(q, letter, degree);
        }
        let (k, r) = self.plug_states.borrow().keys[q - self.nodes.len()];
        let f = self.plugs[k].transition(r, letter, degree)?;
        self.lift(k, &f)
    }

    fn priority(&self, q: AState) -> u32 {
        if q < self.nodes.len() {
            return match self.nodes[q] {
                Node::Until(..) => UNTIL_PRIORITY,
                _ => WEAK_PRIORITY,
            };
        }
        let (k, r) = self.plug_states.borrow().keys[q - self.nodes.len()];
        self.plugs[k].priority(r)
    }

    fn kind(&self) -> AcceptanceKind {
        self.kind
    }

    fn discovered(&self) -> usize {
        self.nodes.len() + self.plug_states.borrow().len()
    }

    fn describe(&self, q: AState) -> String {
        if q < self.nodes.len() {
            return self.names[q].clone();
        }
        let (k, r) = self.plug_states.borrow().keys[q - self.nodes.len()];
        format!("plug{k}:{}", self.plugs[k].describe(r))
    }
}
