use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{FreshNames, Formula, PathFormula, Prop};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error("proposition `{0}` is bound in the formula and cannot be substituted")]
    BoundTarget(Prop),
}

/// Replaces the free occurrences of `from` by `to`. `to` must not be bound in
/// `f` where `from` occurs free (fresh names satisfy this).
pub fn rename_free(f: &Formula, from: Prop, to: Prop) -> Formula {
    match f {
        Formula::Prop(p) if *p == from => Formula::Prop(to),
        Formula::Exists(ps, _) | Formula::Forall(ps, _) if ps.contains(&from) => f.clone(),
        _ => f.map_children(&mut |c| rename_free(c, from, to)),
    }
}

/// Capture-avoiding substitution of free propositions by formulas.
pub fn substitute(f: &Formula, bindings: &BTreeMap<Prop, Formula>) -> Result<Formula, SubstError> {
    let bound = f.bound_props();
    if let Some(p) = bindings.keys().find(|p| bound.contains(p)) {
        return Err(SubstError::BoundTarget(*p));
    }
    let mut fresh = FreshNames::for_formula(f);
    let mut dangerous = BTreeSet::new();
    for g in bindings.values() {
        fresh.avoid(g);
        dangerous.extend(g.free_props());
    }
    Ok(subst_rec(f, bindings, &dangerous, &mut fresh))
}

fn subst_rec(
    f: &Formula,
    bindings: &BTreeMap<Prop, Formula>,
    dangerous: &BTreeSet<Prop>,
    fresh: &mut FreshNames,
) -> Formula {
    match f {
        Formula::Prop(p) => bindings.get(p).cloned().unwrap_or_else(|| f.clone()),
        Formula::Exists(ps, body) | Formula::Forall(ps, body) => {
            let mut body = (**body).clone();
            let mut new_ps = Vec::with_capacity(ps.len());
            for &p in ps {
                if dangerous.contains(&p) {
                    let q = fresh.next();
                    body = rename_free(&body, p, q);
                    new_ps.push(q);
                } else {
                    new_ps.push(p);
                }
            }
            let body = subst_rec(&body, bindings, dangerous, fresh);
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(new_ps, Box::new(body))
            } else {
                Formula::Forall(new_ps, Box::new(body))
            }
        }
        _ => f.map_children(&mut |c| subst_rec(c, bindings, dangerous, fresh)),
    }
}

fn resolve(map: &HashMap<Prop, Vec<Prop>>, p: Prop) -> Option<Prop> {
    map.get(&p).and_then(|v| v.last().copied())
}

/// Structural equality up to renaming of bound propositions.
pub fn alpha_equivalent(f: &Formula, g: &Formula) -> bool {
    alpha_rec(f, g, &mut HashMap::new(), &mut HashMap::new())
}

fn alpha_rec(
    f: &Formula,
    g: &Formula,
    left: &mut HashMap<Prop, Vec<Prop>>,
    right: &mut HashMap<Prop, Vec<Prop>>,
) -> bool {
    use Formula::*;
    match (f, g) {
        (True, True) | (False, False) => true,
        (Prop(p), Prop(q)) => match (resolve(left, *p), resolve(right, *q)) {
            (Some(a), Some(b)) => a == *q && b == *p,
            (None, None) => p == q,
            _ => false,
        },
        (Not(a), Not(b)) => alpha_rec(a, b, left, right),
        (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Implies(a, b), Implies(c, d)) | (Iff(a, b), Iff(c, d)) => {
            alpha_rec(a, c, left, right) && alpha_rec(b, d, left, right)
        }
        (Exists(ps, a), Exists(qs, b)) | (Forall(ps, a), Forall(qs, b)) => {
            if ps.len() != qs.len() {
                return false;
            }
            for (p, q) in ps.iter().zip(qs) {
                left.entry(*p).or_default().push(*q);
                right.entry(*q).or_default().push(*p);
            }
            let ok = alpha_rec(a, b, left, right);
            for (p, q) in ps.iter().zip(qs) {
                left.get_mut(p).map(Vec::pop);
                right.get_mut(q).map(Vec::pop);
            }
            ok
        }
        (Path(q1, p1), Path(q2, p2)) => q1 == q2 && alpha_path(p1, p2, left, right),
        _ => false,
    }
}

fn alpha_path(
    f: &PathFormula,
    g: &PathFormula,
    left: &mut HashMap<Prop, Vec<Prop>>,
    right: &mut HashMap<Prop, Vec<Prop>>,
) -> bool {
    use PathFormula::*;
    match (f, g) {
        (State(a), State(b)) => alpha_rec(a, b, left, right),
        (Not(a), Not(b)) | (Next(a), Next(b)) | (Finally(a), Finally(b)) | (Globally(a), Globally(b)) => {
            alpha_path(a, b, left, right)
        }
        (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Until(a, b), Until(c, d)) | (WeakUntil(a, b), WeakUntil(c, d)) => {
            alpha_path(a, c, left, right) && alpha_path(b, d, left, right)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn substitute_free() {
        let f = parse_formula("E F p").unwrap();
        let mut b = BTreeMap::new();
        b.insert(Prop::new("p"), parse_formula("q & r").unwrap());
        assert_eq!(substitute(&f, &b).unwrap(), parse_formula("E F (q & r)").unwrap());
    }

    #[test]
    fn substitute_bound_is_error() {
        let f = parse_formula("exists p. p").unwrap();
        let mut b = BTreeMap::new();
        b.insert(Prop::new("p"), Formula::prop("q"));
        assert_eq!(substitute(&f, &b), Err(SubstError::BoundTarget(Prop::new("p"))));
    }

    #[test]
    fn substitute_avoids_capture() {
        let f = parse_formula("exists q. (q & s)").unwrap();
        let mut b = BTreeMap::new();
        b.insert(Prop::new("s"), Formula::prop("q"));
        let g = substitute(&f, &b).unwrap();
        let expected = parse_formula("exists z. (z & q)").unwrap();
        assert!(alpha_equivalent(&g, &expected), "{g}");
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_formula("exists p. E X p").unwrap();
        let b = parse_formula("exists q. E X q").unwrap();
        let c = parse_formula("exists q. E X p").unwrap();
        assert!(alpha_equivalent(&a, &b));
        assert!(!alpha_equivalent(&a, &c));
        assert!(!alpha_equivalent(&c, &a));
    }
}
