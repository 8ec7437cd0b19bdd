use std::collections::BTreeMap;

use crate::corpus::fresh_named;
use crate::logic::{substitute, Formula, PathFormula, Prop, SubstError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LfpError {
    #[error("hole `{0}` occurs under an odd number of negations")]
    NotMonotone(Prop),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

/// Whether every free occurrence of `hole` is under an even number of
/// negations (`positive`) or an odd one (`!positive`).
fn positive_only(f: &Formula, hole: Prop, positive: bool) -> bool {
    use Formula::*;
    match f {
        True | False => true,
        Prop(p) => *p != hole || positive,
        Not(a) => positive_only(a, hole, !positive),
        And(a, b) | Or(a, b) => positive_only(a, hole, positive) && positive_only(b, hole, positive),
        Implies(a, b) => positive_only(a, hole, !positive) && positive_only(b, hole, positive),
        Iff(a, b) => !a.free_props().contains(&hole) && !b.free_props().contains(&hole),
        Exists(ps, a) | Forall(ps, a) => ps.contains(&hole) || positive_only(a, hole, positive),
        Path(_, p) => path_positive(p, hole, positive),
    }
}

fn path_positive(p: &PathFormula, hole: Prop, positive: bool) -> bool {
    use PathFormula::*;
    match p {
        State(f) => positive_only(f, hole, positive),
        Not(a) => path_positive(a, hole, !positive),
        Next(a) | Finally(a) | Globally(a) => path_positive(a, hole, positive),
        And(a, b) | Or(a, b) | Until(a, b) | WeakUntil(a, b) => {
            path_positive(a, hole, positive) && path_positive(b, hole, positive)
        }
    }
}

/// Encodes the least fixpoint `μhole.body` as
/// `∃t.[t ∧ AG(t ↔ body(t)) ∧ ∀u.(AG(u ↔ body(u)) → AG(t → u))]`.
pub fn lfp_encode(hole: Prop, body: &Formula) -> Result<Formula, LfpError> {
    if !positive_only(body, hole, true) {
        return Err(LfpError::NotMonotone(hole));
    }
    let mut avoid = body.all_props();
    avoid.insert(hole);
    let t = fresh_named("t", &avoid);
    avoid.insert(t);
    let u = fresh_named("u", &avoid);
    let at = |p: Prop| -> Result<Formula, SubstError> {
        substitute(body, &BTreeMap::from([(hole, Formula::atom(p))]))
    };
    let (t_f, u_f) = (Formula::atom(t), Formula::atom(u));
    Ok(Formula::exists1(
        t,
        Formula::conj([
            t_f.clone(),
            Formula::ag(Formula::iff(t_f.clone(), at(t)?)),
            Formula::forall1(
                u,
                Formula::implies(
                    Formula::ag(Formula::iff(u_f.clone(), at(u)?)),
                    Formula::ag(Formula::implies(t_f, u_f)),
                ),
            ),
        ]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn until_fixpoint_text() {
        let body = parse_formula("b | (a & E X T)").unwrap();
        let f = lfp_encode(Prop::new("T"), &body).unwrap();
        assert_eq!(
            f.to_string(),
            "exists t. t & A G (t <-> b | a & E X t) & (forall u. A G (u <-> b | a & E X u) -> A G (t -> u))"
        );
    }

    #[test]
    fn rejects_negative_hole() {
        let body = parse_formula("b | !E X T").unwrap();
        assert!(matches!(lfp_encode(Prop::new("T"), &body), Err(LfpError::NotMonotone(_))));
        let body = parse_formula("(T -> b) | T").unwrap();
        assert!(lfp_encode(Prop::new("T"), &body).is_err());
    }
}
