use std::collections::BTreeSet;

use crate::kripke::{relabel_variants, Kripke, StateId};
use crate::logic::{quantifier_depth, Formula, Quant, Temporal};

pub const BRUTE_MAX_STATES: usize = 6;
pub const BRUTE_MAX_DEPTH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BruteError {
    #[error("reference evaluator limited to {BRUTE_MAX_STATES} states, structure has {0}")]
    TooManyStates(usize),
    #[error("reference evaluator limited to quantifier depth {BRUTE_MAX_DEPTH}, formula has {0}")]
    TooDeep(usize),
    #[error("not a QCTL formula")]
    NotQctl,
}

/// Reference evaluator for the structure semantics. Each clause is coded
/// literally: quantifiers enumerate every relabelling of the structure and
/// temporal operators search paths directly. Nothing is cached.
pub fn brute_force_sat(s: &Kripke, q: StateId, f: &Formula) -> Result<bool, BruteError> {
    if s.len() > BRUTE_MAX_STATES {
        return Err(BruteError::TooManyStates(s.len()));
    }
    let d = quantifier_depth(f);
    if d > BRUTE_MAX_DEPTH {
        return Err(BruteError::TooDeep(d));
    }
    if !f.is_qctl() {
        return Err(BruteError::NotQctl);
    }
    Ok(holds(s, q, f))
}

fn holds(s: &Kripke, q: StateId, f: &Formula) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => s.labels(q).contains(p),
        Formula::Not(a) => !holds(s, q, a),
        Formula::And(a, b) => holds(s, q, a) && holds(s, q, b),
        Formula::Or(a, b) => holds(s, q, a) || holds(s, q, b),
        Formula::Implies(a, b) => !holds(s, q, a) || holds(s, q, b),
        Formula::Iff(a, b) => holds(s, q, a) == holds(s, q, b),
        Formula::Exists(ps, a) => variants(s, ps).any(|v| holds(&v, q, a)),
        Formula::Forall(ps, a) => variants(s, ps).all(|v| holds(&v, q, a)),
        Formula::Path(quant, p) => {
            let t = p.as_temporal().expect("checked QCTL");
            let sat = |g: &Formula| -> Vec<bool> { s.states().map(|r| holds(s, r, g)).collect() };
            match (quant, t) {
                (Quant::E, Temporal::X(a)) => s.succ(q).iter().any(|&r| holds(s, r, a)),
                (Quant::A, Temporal::X(a)) => s.succ(q).iter().all(|&r| holds(s, r, a)),
                (Quant::E, Temporal::F(a)) => eu(s, q, &vec![true; s.len()], &sat(a)),
                (Quant::A, Temporal::F(a)) => !eg(s, q, &negate(&sat(a))),
                (Quant::E, Temporal::G(a)) => eg(s, q, &sat(a)),
                (Quant::A, Temporal::G(a)) => !eu(s, q, &vec![true; s.len()], &negate(&sat(a))),
                (Quant::E, Temporal::U(a, b)) => eu(s, q, &sat(a), &sat(b)),
                (Quant::E, Temporal::W(a, b)) => {
                    let (a, b) = (sat(a), sat(b));
                    eu(s, q, &a, &b) || eg(s, q, &a)
                }
                (Quant::A, Temporal::U(a, b)) => {
                    let (a, b) = (sat(a), sat(b));
                    let nb = negate(&b);
                    !(eu(s, q, &nb, &neither(&a, &b)) || eg(s, q, &nb))
                }
                (Quant::A, Temporal::W(a, b)) => {
                    let (a, b) = (sat(a), sat(b));
                    !eu(s, q, &negate(&b), &neither(&a, &b))
                }
            }
        }
    }
}

fn variants(s: &Kripke, ps: &[crate::logic::Prop]) -> impl Iterator<Item = Kripke> {
    let set: BTreeSet<_> = ps.iter().copied().collect();
    relabel_variants(s, &set, 62).expect("checked scale")
}

fn negate(v: &[bool]) -> Vec<bool> {
    v.iter().map(|b| !b).collect()
}

fn neither(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| !x && !y).collect()
}

/// Is some `b`-state reachable from `q` through `a`-states?
fn eu(s: &Kripke, q: StateId, a: &[bool], b: &[bool]) -> bool {
    let mut seen = vec![false; s.len()];
    let mut stack = vec![q];
    while let Some(r) = stack.pop() {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if b[r] {
            return true;
        }
        if a[r] {
            stack.extend(s.succ(r));
        }
    }
    false
}

/// Is there an infinite path from `q` staying in `a`-states? Searches for an
/// `a`-state, reachable through `a`-states, that lies on an `a`-cycle.
fn eg(s: &Kripke, q: StateId, a: &[bool]) -> bool {
    if !a[q] {
        return false;
    }
    let region = a_reach(s, &[q], a);
    s.states()
        .filter(|&r| region[r])
        .any(|r| {
            let starts: Vec<StateId> = s.succ(r).iter().copied().filter(|&t| a[t]).collect();
            a_reach(s, &starts, a)[r]
        })
}

fn a_reach(s: &Kripke, from: &[StateId], a: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; s.len()];
    let mut stack = from.to_vec();
    while let Some(r) = stack.pop() {
        if seen[r] || !a[r] {
            continue;
        }
        seen[r] = true;
        stack.extend(s.succ(r));
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::s0;
    use crate::logic::parse_formula;

    fn b(s: &Kripke, q: StateId, f: &str) -> bool {
        brute_force_sat(s, q, &parse_formula(f).unwrap()).unwrap()
    }

    #[test]
    fn paper_examples() {
        let s = s0();
        assert!(b(&s, 0, "forall z. (z -> E X z)"));
        assert!(!b(&s, 0, "E X (forall p. (E F p -> p))"));
        assert!(b(&s, 0, "exists z. forall p. E X (z & (E F p -> p))"));
        assert!(b(&s, 1, "true"));
    }

    #[test]
    fn acyclic_is_false() {
        let s = s0();
        let acyclic = "A G (exists z. (z & (E F z & (forall w. (E F (z & w) -> A G (z -> w)))) & A X A G !z))";
        assert!(!b(&s, 0, acyclic));
        assert!(!b(&s, 1, acyclic));
    }

    #[test]
    fn scale_limits() {
        let f = parse_formula("exists a. exists b. exists c. exists d. a").unwrap();
        assert_eq!(brute_force_sat(&s0(), 0, &f), Err(BruteError::TooDeep(4)));
    }
}
