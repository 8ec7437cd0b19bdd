use std::collections::BTreeSet;

use crate::corpus::{fresh_named, uniq};
use crate::logic::{rename_free, Formula, NotQctl, Prop, Quant, Temporal};

type Prefix = Vec<(Quant, Prop)>;

/// Rewrites a QCTL formula into an equivalent one (under both semantics)
/// whose quantifiers all sit in a single outer prefix over a CTL matrix.
/// Rules are applied bottom-up. Bound propositions are kept when they are
/// unique and renamed apart otherwise; introduced markers are named
/// `z`, `z1`, ... avoiding every proposition already in use.
pub fn prenex(f: &Formula) -> Result<Formula, NotQctl> {
    if !f.is_qctl() {
        return Err(NotQctl(f.to_string()));
    }
    if f.is_quantifier_free() {
        return Ok(f.clone());
    }
    let mut p = Prenexer {
        used: f.free_props(),
    };
    let (prefix, matrix) = p.rec(f);
    Ok(close(prefix, matrix))
}

/// Folds a prefix back onto a matrix, merging runs of the same quantifier
/// into one block.
fn close(prefix: Prefix, matrix: Formula) -> Formula {
    let mut blocks: Vec<(Quant, Vec<Prop>)> = Vec::new();
    for (q, p) in prefix {
        match blocks.last_mut() {
            Some((last, ps)) if *last == q => ps.push(p),
            _ => blocks.push((q, vec![p])),
        }
    }
    blocks.into_iter().rev().fold(matrix, |acc, (q, ps)| match q {
        Quant::E => Formula::exists(ps, acc),
        Quant::A => Formula::forall(ps, acc),
    })
}

fn dual(prefix: Prefix) -> Prefix {
    prefix.into_iter().map(|(q, p)| (q.dual(), p)).collect()
}

struct Prenexer {
    /// Every proposition free in the input or bound in the output so far.
    used: BTreeSet<Prop>,
}

impl Prenexer {
    fn marker(&mut self, base: &str) -> Prop {
        let p = fresh_named(base, &self.used);
        self.used.insert(p);
        p
    }

    fn binary(&mut self, a: &Formula, b: &Formula, op: fn(Formula, Formula) -> Formula) -> (Prefix, Formula) {
        let (mut pa, ma) = self.rec(a);
        let (pb, mb) = self.rec(b);
        pa.extend(pb);
        (pa, op(ma, mb))
    }

    fn rec(&mut self, f: &Formula) -> (Prefix, Formula) {
        if f.is_quantifier_free() {
            return (Vec::new(), f.clone());
        }
        match f {
            Formula::True | Formula::False | Formula::Prop(_) => (Vec::new(), f.clone()),
            Formula::Not(a) => {
                let (p, m) = self.rec(a);
                (dual(p), Formula::not(m))
            }
            Formula::And(a, b) => self.binary(a, b, Formula::and),
            Formula::Or(a, b) => self.binary(a, b, Formula::or),
            Formula::Implies(a, b) => self.rec(&Formula::or(Formula::not((**a).clone()), (**b).clone())),
            Formula::Iff(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                let both = Formula::and(a.clone(), b.clone());
                let neither = Formula::and(Formula::not(a), Formula::not(b));
                self.rec(&Formula::or(both, neither))
            }
            Formula::Exists(ps, body) | Formula::Forall(ps, body) => {
                let q = if matches!(f, Formula::Exists(..)) { Quant::E } else { Quant::A };
                let mut body = (**body).clone();
                let mut prefix = Vec::new();
                for &p in ps {
                    let name = if self.used.contains(&p) { self.marker(p.name()) } else { p };
                    self.used.insert(name);
                    if name != p {
                        body = rename_free(&body, p, name);
                    }
                    prefix.push((q, name));
                }
                let (inner, m) = self.rec(&body);
                prefix.extend(inner);
                (prefix, m)
            }
            Formula::Path(q, path) => {
                let t = path.as_temporal().expect("checked QCTL");
                self.temporal(*q, t)
            }
        }
    }

    fn temporal(&mut self, q: Quant, t: Temporal<'_>) -> (Prefix, Formula) {
        use Formula as F;
        let not = |f: &Formula| F::not(f.clone());
        match (q, t) {
            (Quant::E, Temporal::X(a)) => {
                // EX Q.φ ≡ ∃z.Q.(uniq(z) ∧ EX(z ∧ φ))
                let (qa, ma) = self.rec(a);
                let z = self.marker("z");
                let (qu, mu) = self.rec(&uniq(&F::atom(z)));
                let mut prefix = vec![(Quant::E, z)];
                prefix.extend(qa);
                prefix.extend(qu);
                (prefix, F::and(mu, F::ex(F::and(F::atom(z), ma))))
            }
            (Quant::A, Temporal::X(a)) => self.rec(&not(&F::ex(not(a)))),
            (Quant::E, Temporal::G(a)) => {
                // EG Q.φ ≡ ∃z.∀z'.Q.(z ∧ AG(z → EX z) ∧ (uniq(z') → AG((z ∧ z') → φ))).
                // Demanding a unique marked successor would reject lassos
                // whose states also point back into the marked set.
                let (qa, ma) = self.rec(a);
                let z = self.marker("z");
                let z2 = self.marker("z");
                let (z, z2) = (F::atom(z), F::atom(z2));
                let rest = F::conj([
                    z.clone(),
                    F::ag(F::implies(z.clone(), F::ex(z.clone()))),
                    F::implies(uniq(&z2), F::ag(F::implies(F::and(z.clone(), z2.clone()), ma))),
                ]);
                let (qr, mr) = self.rec(&rest);
                let mut prefix = vec![(Quant::E, atom_prop(&z)), (Quant::A, atom_prop(&z2))];
                prefix.extend(qa);
                prefix.extend(qr);
                (prefix, mr)
            }
            (Quant::A, Temporal::G(a)) => {
                // AG Q.φ ≡ ∀z.Q.(uniq(z) → AG(z → φ))
                let (qa, ma) = self.rec(a);
                let z = self.marker("z");
                let (qu, mu) = self.rec(&uniq(&F::atom(z)));
                let mut prefix = vec![(Quant::A, z)];
                prefix.extend(qa);
                prefix.extend(dual(qu));
                (prefix, F::or(F::not(mu), F::ag(F::implies(F::atom(z), ma))))
            }
            (Quant::E, Temporal::U(a, b)) => {
                let f = flatten_until_avoiding(a, b, self);
                self.rec(&f)
            }
            (Quant::E, Temporal::F(a)) => self.temporal(Quant::E, Temporal::U(&F::True, a)),
            (Quant::A, Temporal::F(a)) => self.rec(&not(&F::eg(not(a)))),
            (Quant::A, Temporal::U(a, b)) => {
                let f = F::and(
                    not(&F::eg(not(b))),
                    not(&F::eu(not(b), F::and(not(a), not(b)))),
                );
                self.rec(&f)
            }
            (Quant::E, Temporal::W(a, b)) => self.rec(&F::or(F::eu(a.clone(), b.clone()), F::eg(a.clone()))),
            (Quant::A, Temporal::W(a, b)) => self.rec(&not(&F::eu(not(b), F::and(not(a), not(b))))),
        }
    }
}

fn atom_prop(f: &Formula) -> Prop {
    match f {
        Formula::Prop(p) => *p,
        _ => unreachable!("markers are atoms"),
    }
}

fn flatten_until_avoiding(a: &Formula, b: &Formula, p: &mut Prenexer) -> Formula {
    let z1 = p.marker("z");
    let z2 = p.marker("z");
    until_body(a, b, z1, z2)
}

fn until_body(a: &Formula, b: &Formula, z1: Prop, z2: Prop) -> Formula {
    let (z1, z2) = (Formula::atom(z1), Formula::atom(z2));
    Formula::exists(
        vec![atom_prop(&z1), atom_prop(&z2)],
        Formula::and(
            Formula::eu(z1.clone(), z2.clone()),
            Formula::ag(Formula::and(
                Formula::implies(z1, a.clone()),
                Formula::implies(z2, b.clone()),
            )),
        ),
    )
}

/// `∃z1,z2.(E z1 U z2 ∧ AG[(z1 → φ1) ∧ (z2 → φ2)])`, equivalent to `E φ1 U φ2`
/// under both semantics.
pub fn flatten_until(a: &Formula, b: &Formula) -> Formula {
    let mut avoid = a.all_props();
    avoid.extend(b.all_props());
    let z1 = fresh_named("z1", &avoid);
    avoid.insert(z1);
    let z2 = fresh_named("z2", &avoid);
    until_body(a, b, z1, z2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::tests::s0;
    use crate::logic::{is_prenex, parse_formula};
    use crate::mc_structure::{brute_force_sat, check, CheckOptions};

    fn agree(f: &str) {
        let f = parse_formula(f).unwrap();
        let g = prenex(&f).unwrap();
        assert!(is_prenex(&g), "{g}");
        let s = s0();
        for q in s.states() {
            let want = brute_force_sat(&s, q, &f).unwrap();
            assert_eq!(check(&s, q, &g, &CheckOptions::default()).unwrap(), want, "{f} at {q}: {g}");
        }
    }

    #[test]
    fn unchanged_without_quantifiers() {
        let f = parse_formula("A [p U E X q]").unwrap();
        assert_eq!(prenex(&f).unwrap(), f);
    }

    #[test]
    fn ex_rule() {
        let f = parse_formula("E X (exists p. p)").unwrap();
        let g = prenex(&f).unwrap();
        assert!(g.to_string().starts_with("exists z, p. forall z1."), "{g}");
        agree("E X (forall p. (E F p -> p))");
        agree("exists p. E F p");
    }

    #[test]
    fn temporal_rules() {
        agree("E G (exists p. (p & r))");
        agree("A X (exists p. (p & E X !p))");
        agree("E [(forall p. (p -> r)) U !r]");
    }

    /// Every path from `s0` goes through `s1`, which also points back to
    /// `s0`: no marked path has unique marked successors.
    #[test]
    fn globally_on_a_lasso_with_back_edges() {
        let f = parse_formula("exists b. E G b").unwrap();
        let g = prenex(&f).unwrap();
        let s = crate::kripke::parse_structure("state s0\nstate s1\nedge s0 s1\nedge s1 s0\nedge s1 s1").unwrap();
        assert!(check(&s, 0, &g, &CheckOptions::default()).unwrap(), "{g}");
    }

    #[test]
    fn flatten_text() {
        let f = flatten_until(&Formula::prop("p"), &Formula::prop("q"));
        assert_eq!(f.to_string(), "exists z1, z2. E [z1 U z2] & A G ((z1 -> p) & (z2 -> q))");
    }
}
