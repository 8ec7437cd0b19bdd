use super::{Formula, Temporal};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("formula is not in QCTL (path formula `{0}` is not a single temporal operator over state formulas)")]
pub struct NotQctl(pub String);

/// Negation normal form over ¬atom, ∧, ∨, EX, AX, EU, AU, EW, AW and
/// quantifiers. Negation may remain directly above a quantifier node; the
/// bodies of quantifiers are normalized too. F and G are rewritten into until
/// forms, implications and equivalences are expanded.
pub fn negation_normal_form(f: &Formula) -> Result<Formula, NotQctl> {
    nnf(f, false)
}

fn nnf(f: &Formula, neg: bool) -> Result<Formula, NotQctl> {
    use Formula::*;
    Ok(match f {
        True => {
            if neg {
                False
            } else {
                True
            }
        }
        False => {
            if neg {
                True
            } else {
                False
            }
        }
        Prop(_) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Not(g) => nnf(g, !neg)?,
        And(a, b) => {
            let (x, y) = (nnf(a, neg)?, nnf(b, neg)?);
            if neg {
                Formula::or(x, y)
            } else {
                Formula::and(x, y)
            }
        }
        Or(a, b) => {
            let (x, y) = (nnf(a, neg)?, nnf(b, neg)?);
            if neg {
                Formula::and(x, y)
            } else {
                Formula::or(x, y)
            }
        }
        Implies(a, b) => {
            if neg {
                Formula::and(nnf(a, false)?, nnf(b, true)?)
            } else {
                Formula::or(nnf(a, true)?, nnf(b, false)?)
            }
        }
        Iff(a, b) => {
            let (pa, na, pb, nb) = (nnf(a, false)?, nnf(a, true)?, nnf(b, false)?, nnf(b, true)?);
            if neg {
                Formula::or(Formula::and(pa, nb), Formula::and(na, pb))
            } else {
                Formula::or(Formula::and(pa, pb), Formula::and(na, nb))
            }
        }
        Exists(ps, g) | Forall(ps, g) => {
            let body = Box::new(nnf(g, false)?);
            let q = if matches!(f, Exists(..)) {
                Exists(ps.clone(), body)
            } else {
                Forall(ps.clone(), body)
            };
            if neg {
                Formula::not(q)
            } else {
                q
            }
        }
        Path(q, p) => {
            let t = p.as_temporal().ok_or_else(|| NotQctl(p.to_string()))?;
            let existential = matches!(q, super::Quant::E) != neg;
            match t {
                Temporal::X(a) => {
                    let a = nnf(a, neg)?;
                    if existential {
                        Formula::ex(a)
                    } else {
                        Formula::ax(a)
                    }
                }
                Temporal::U(a, b) => until_like(a, b, existential, neg, true)?,
                Temporal::W(a, b) => until_like(a, b, existential, neg, false)?,
                Temporal::F(a) => {
                    if neg {
                        // ¬ Q F a = Q̄ G ¬a = Q̄ [¬a W false]
                        let na = nnf(a, true)?;
                        if existential {
                            Formula::ew(na, False)
                        } else {
                            Formula::aw(na, False)
                        }
                    } else if existential {
                        Formula::eu(True, nnf(a, false)?)
                    } else {
                        Formula::au(True, nnf(a, false)?)
                    }
                }
                Temporal::G(a) => {
                    if neg {
                        let na = nnf(a, true)?;
                        if existential {
                            Formula::eu(True, na)
                        } else {
                            Formula::au(True, na)
                        }
                    } else if existential {
                        Formula::ew(nnf(a, false)?, False)
                    } else {
                        Formula::aw(nnf(a, false)?, False)
                    }
                }
            }
        }
    })
}

/// Positive: `Q[a U b]` / `Q[a W b]`. Negated: `Q̄[¬b W (¬b ∧ ¬a)]` /
/// `Q̄[¬b U (¬b ∧ ¬a)]`.
fn until_like(a: &Formula, b: &Formula, existential: bool, neg: bool, strong: bool) -> Result<Formula, NotQctl> {
    let (lhs, rhs, strong) = if neg {
        let nb = nnf(b, true)?;
        (nb.clone(), Formula::and(nb, nnf(a, true)?), !strong)
    } else {
        (nnf(a, false)?, nnf(b, false)?, strong)
    };
    Ok(match (existential, strong) {
        (true, true) => Formula::eu(lhs, rhs),
        (false, true) => Formula::au(lhs, rhs),
        (true, false) => Formula::ew(lhs, rhs),
        (false, false) => Formula::aw(lhs, rhs),
    })
}

/// True when negations occur only on atoms or directly above quantifiers and
/// no derived operator remains.
pub fn is_nnf(f: &Formula) -> bool {
    use Formula::*;
    match f {
        True | False | Prop(_) => true,
        Not(g) => matches!(**g, Prop(_)) || matches!(**g, Exists(..) | Forall(..)) && is_nnf(g),
        And(a, b) | Or(a, b) => is_nnf(a) && is_nnf(b),
        Implies(..) | Iff(..) => false,
        Exists(_, g) | Forall(_, g) => is_nnf(g),
        Path(_, p) => match p.as_temporal() {
            Some(Temporal::X(a)) => is_nnf(a),
            Some(Temporal::U(a, b)) | Some(Temporal::W(a, b)) => is_nnf(a) && is_nnf(b),
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn n(s: &str) -> Formula {
        negation_normal_form(&parse_formula(s).unwrap()).unwrap()
    }

    #[test]
    fn until_duality() {
        assert_eq!(n("!E [p U q]"), parse_formula("A [!q W !q & !p]").unwrap());
    }

    #[test]
    fn double_negation() {
        assert_eq!(n("!!p"), parse_formula("p").unwrap());
    }

    #[test]
    fn next_duality() {
        assert_eq!(n("!A X p"), parse_formula("E X !p").unwrap());
    }

    #[test]
    fn quantifiers_stay_opaque() {
        let f = n("!(exists p. !(p & q))");
        assert_eq!(f, parse_formula("!(exists p. !p | !q)").unwrap());
        assert!(is_nnf(&f));
    }

    #[test]
    fn globally_and_finally() {
        assert_eq!(n("!E F p"), parse_formula("A [!p W false]").unwrap());
        assert_eq!(n("A G p"), parse_formula("A [p W false]").unwrap());
        assert_eq!(n("!A G p"), parse_formula("E [true U !p]").unwrap());
    }

    #[test]
    fn rejects_star() {
        assert!(negation_normal_form(&parse_formula("E (X X p)").unwrap()).is_err());
    }
}
