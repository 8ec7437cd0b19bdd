use crate::kripke::P_INT;
use crate::logic::{Formula, NotQctl, Prop, Quant, Temporal};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HatError {
    #[error("formula already uses `{P_INT}`")]
    UsesPInt,
    #[error(transparent)]
    NotQctl(#[from] NotQctl),
}

/// Rewrites a formula about a structure into one about its binary encoding,
/// where intermediate states are marked `p_int`. Derived operators are first
/// reduced to `EX`, `EU` and `AU`.
pub fn hat_transform(f: &Formula) -> Result<Formula, HatError> {
    if !f.is_qctl() {
        return Err(NotQctl(f.to_string()).into());
    }
    let p_int = Prop::new(P_INT);
    if f.all_props().contains(&p_int) {
        return Err(HatError::UsesPInt);
    }
    Ok(hat(f, p_int))
}

fn hat(f: &Formula, p_int: Prop) -> Formula {
    use Formula as F;
    let int = || F::atom(p_int);
    let real = |g: Formula| F::and(F::not(int()), g);
    // E/A (p_int ∨ a) U (¬p_int ∧ b), arguments already transformed
    let until = |q: Quant, a: Formula, b: Formula| match q {
        Quant::E => F::eu(F::or(int(), a), real(b)),
        Quant::A => F::au(F::or(int(), a), real(b)),
    };
    let ex = |a: Formula| F::ex(F::eu(int(), real(a)));
    match f {
        F::True | F::False | F::Prop(_) => f.clone(),
        F::Not(a) => F::not(hat(a, p_int)),
        F::And(a, b) => F::and(hat(a, p_int), hat(b, p_int)),
        F::Or(a, b) => F::or(hat(a, p_int), hat(b, p_int)),
        F::Implies(a, b) => F::or(F::not(hat(a, p_int)), hat(b, p_int)),
        F::Iff(a, b) => {
            let (a, b) = (hat(a, p_int), hat(b, p_int));
            F::or(F::and(a.clone(), b.clone()), F::and(F::not(a), F::not(b)))
        }
        F::Exists(ps, a) => F::exists(ps.clone(), hat(a, p_int)),
        F::Forall(ps, a) => F::forall(ps.clone(), hat(a, p_int)),
        F::Path(q, p) => {
            let q = *q;
            match p.as_temporal().expect("checked QCTL") {
                Temporal::X(a) => {
                    let a = hat(a, p_int);
                    match q {
                        Quant::E => ex(a),
                        Quant::A => F::not(ex(F::not(a))),
                    }
                }
                Temporal::U(a, b) => until(q, hat(a, p_int), hat(b, p_int)),
                Temporal::F(a) => until(q, F::True, hat(a, p_int)),
                // EG a = ¬AF ¬a, AG a = ¬EF ¬a
                Temporal::G(a) => F::not(until(q.dual(), F::True, F::not(hat(a, p_int)))),
                // E a W b = ¬A(¬b U (¬a ∧ ¬b)), A a W b = ¬E(¬b U (¬a ∧ ¬b))
                Temporal::W(a, b) => {
                    let (a, b) = (hat(a, p_int), hat(b, p_int));
                    let stop = F::and(F::not(a), F::not(b.clone()));
                    F::not(until(q.dual(), F::not(b), stop))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn h(s: &str) -> String {
        hat_transform(&parse_formula(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn rules() {
        assert_eq!(h("E [p U q]"), "E [p_int | p U !p_int & q]");
        assert_eq!(h("p"), "p");
        assert_eq!(h("E X p"), "E X E [p_int U !p_int & p]");
        assert_eq!(h("exists p. !p"), "exists p. !p");
    }

    #[test]
    fn rejects_p_int() {
        assert_eq!(
            hat_transform(&parse_formula("E X p_int").unwrap()),
            Err(HatError::UsesPInt)
        );
    }
}
