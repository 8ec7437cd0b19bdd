use std::collections::HashMap;

use super::{Formula, PathFormula, Prop, Quant};

/// Number of nodes in the syntax tree. A block `exists p, q.` counts as two
/// quantifier nodes; the embedding of a state formula into a path formula is
/// not a node.
pub fn size(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => 1,
        Formula::Not(a) => 1 + size(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            1 + size(a) + size(b)
        }
        Formula::Exists(ps, a) | Formula::Forall(ps, a) => ps.len() + size(a),
        Formula::Path(_, p) => 1 + path_size(p),
    }
}

fn path_size(p: &PathFormula) -> usize {
    use PathFormula::*;
    match p {
        State(f) => size(f),
        Not(a) | Next(a) | Finally(a) | Globally(a) => 1 + path_size(a),
        And(a, b) | Or(a, b) | Until(a, b) | WeakUntil(a, b) => 1 + path_size(a) + path_size(b),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    True,
    False,
    Prop(Prop),
    Unary(&'static str, usize),
    Binary(&'static str, usize, usize),
    Quant(bool, Prop, usize),
    Path(Quant, usize),
}

#[derive(Default)]
struct Sharing {
    ids: HashMap<Key, usize>,
}

impl Sharing {
    fn id(&mut self, k: Key) -> usize {
        let n = self.ids.len();
        *self.ids.entry(k).or_insert(n)
    }

    fn state(&mut self, f: &Formula) -> usize {
        let k = match f {
            Formula::True => Key::True,
            Formula::False => Key::False,
            Formula::Prop(p) => Key::Prop(*p),
            Formula::Not(a) => Key::Unary("not", self.state(a)),
            Formula::And(a, b) => Key::Binary("and", self.state(a), self.state(b)),
            Formula::Or(a, b) => Key::Binary("or", self.state(a), self.state(b)),
            Formula::Implies(a, b) => Key::Binary("imp", self.state(a), self.state(b)),
            Formula::Iff(a, b) => Key::Binary("iff", self.state(a), self.state(b)),
            Formula::Exists(ps, a) | Formula::Forall(ps, a) => {
                let existential = matches!(f, Formula::Exists(..));
                let mut id = self.state(a);
                for p in ps.iter().rev() {
                    id = self.id(Key::Quant(existential, *p, id));
                }
                return id;
            }
            Formula::Path(q, p) => Key::Path(*q, self.path(p)),
        };
        self.id(k)
    }

    fn path(&mut self, p: &PathFormula) -> usize {
        use PathFormula::*;
        let k = match p {
            State(f) => return self.state(f),
            Not(a) => Key::Unary("pnot", self.path(a)),
            Next(a) => Key::Unary("X", self.path(a)),
            Finally(a) => Key::Unary("F", self.path(a)),
            Globally(a) => Key::Unary("G", self.path(a)),
            And(a, b) => Key::Binary("pand", self.path(a), self.path(b)),
            Or(a, b) => Key::Binary("por", self.path(a), self.path(b)),
            Until(a, b) => Key::Binary("U", self.path(a), self.path(b)),
            WeakUntil(a, b) => Key::Binary("W", self.path(a), self.path(b)),
        };
        self.id(k)
    }
}

/// Number of distinct subterms after maximal sharing.
pub fn dag_size(f: &Formula) -> usize {
    let mut s = Sharing::default();
    s.state(f);
    s.ids.len()
}

pub fn size_and_dag_size(f: &Formula) -> (usize, usize) {
    (size(f), dag_size(f))
}
