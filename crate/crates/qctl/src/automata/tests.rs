use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::kripke::{parse_structure, Kripke};
use crate::logic::{negation_normal_form, parse_formula, Formula, Prop};
use crate::mc_structure::{check, CheckOptions};

fn props(names: &[&str]) -> Vec<Prop> {
    names.iter().map(|n| Prop::new(n)).collect()
}

fn ctl_apta(f: &Formula, s: &Kripke, ab: &Alphabet) -> Apta {
    let nnf = negation_normal_form(f).unwrap();
    ctl_to_apta(&nnf, ab.clone(), &s.degrees_from(0)).unwrap()
}

fn member(a: &Apta, s: &Kripke) -> bool {
    accepts(a, s, 0, &Limits::default()).unwrap()
}

/// A random alternating automaton with arbitrary priorities, for the
/// degrees 1 to 3 over a one-proposition alphabet.
fn random_explicit(rng: &mut impl Rng, states: usize, priorities: u32) -> Apta {
    let ab = Alphabet::new(props(&["p"]));
    let degrees = vec![1, 2, 3];
    let mut trans = BTreeMap::new();
    for q in 0..states {
        for &d in &degrees {
            for l in ab.letters() {
                trans.insert((q, d, l), random_pbf(rng, 2, d, states));
            }
        }
    }
    let e = Explicit {
        alphabet: ab.clone(),
        degrees: degrees.clone(),
        names: (0..states).map(|q| format!("q{q}")).collect(),
        priorities: (0..states).map(|_| rng.gen_range(0..priorities)).collect(),
        trans,
        kind: AcceptanceKind::Parity,
    };
    Apta::new(Rc::new(e), ab, &degrees)
}

fn random_pbf(rng: &mut impl Rng, depth: usize, degree: usize, states: usize) -> Pbf {
    let roll = rng.gen_range(0..10);
    if depth == 0 || roll < 4 {
        return match roll {
            0 => Pbf::True,
            1 if depth == 0 => Pbf::False,
            _ => Pbf::atom(rng.gen_range(0..degree), rng.gen_range(0..states)),
        };
    }
    let a = random_pbf(rng, depth - 1, degree, states);
    let b = random_pbf(rng, depth - 1, degree, states);
    if roll < 7 {
        Pbf::and(a, b)
    } else {
        Pbf::or(a, b)
    }
}

#[test]
fn ctl_membership_matches_model_checking() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ps = props(&["p", "q"]);
    let ab = Alphabet::new(ps.clone());
    for _ in 0..300 {
        let s = crate::random::structure(&mut rng, 1..=4, &ps, 3);
        let f = crate::random::ctl(&mut rng, 3, &ps);
        let a = ctl_apta(&f, &s, &ab);
        let expected = check(&s, 0, &f, &CheckOptions::default()).unwrap();
        assert_eq!(member(&a, &s), expected, "{f} on\n{s:?}");
    }
}

#[test]
fn simulation_preserves_membership_on_ctl() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ps = props(&["p", "q"]);
    let ab = Alphabet::new(ps.clone());
    let limits = Limits::default();
    for _ in 0..150 {
        let s = crate::random::structure(&mut rng, 1..=4, &ps, 3);
        let f = crate::random::ctl(&mut rng, 3, &ps);
        let a = ctl_apta(&f, &s, &ab);
        let expected = member(&a, &s);
        for method in [SimulationMethod::Breakpoint, SimulationMethod::Safra] {
            let n = simulate_with(&a, method, &limits).unwrap();
            assert_eq!(member(&n.as_apta(), &s), expected, "{method:?} on {f}");
        }
    }
}

#[test]
fn safra_preserves_membership_on_parity_automata() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let p = Prop::new("p");
    let limits = Limits::default();
    for _ in 0..200 {
        let a = random_explicit(&mut rng, 3, 4);
        let n = simulate_with(&a, SimulationMethod::Safra, &limits).unwrap();
        let s = crate::random::structure(&mut rng, 1..=4, &[p], 3);
        assert_eq!(member(&n.as_apta(), &s), member(&a, &s));
    }
}

#[test]
fn dual_complements() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let p = Prop::new("p");
    for _ in 0..200 {
        let a = random_explicit(&mut rng, 3, 4);
        let s = crate::random::structure(&mut rng, 1..=4, &[p], 3);
        assert_ne!(member(&dual(&a), &s), member(&a, &s));
    }
}

#[test]
fn combine_is_boolean() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let p = Prop::new("p");
    for _ in 0..100 {
        let a = random_explicit(&mut rng, 3, 3);
        let b = random_explicit(&mut rng, 2, 3);
        let s = crate::random::structure(&mut rng, 1..=4, &[p], 3);
        let (x, y) = (member(&a, &s), member(&b, &s));
        assert_eq!(member(&combine(&a, &b, BoolOp::And).unwrap(), &s), x && y);
        assert_eq!(member(&combine(&a, &b, BoolOp::Or).unwrap(), &s), x || y);
    }
}

#[test]
fn constants() {
    let s = parse_structure("state a\nedge a a").unwrap();
    let ab = Alphabet::new(props(&["p"]));
    assert!(member(&accept_all(ab.clone(), &[1]), &s));
    assert!(!member(&reject_all(ab, &[1]), &s));
}

#[test]
fn alternating_is_not_nondeterministic() {
    let s = parse_structure("state a\nstate b\nedge a a\nedge a b\nedge b b").unwrap();
    let ab = Alphabet::new(props(&["p"]));
    let f = parse_formula("E X p & E X !p").unwrap();
    let a = ctl_apta(&f, &s, &ab);
    assert!(matches!(Npta::from_apta(&a, 100), Err(AutomatonError::Shape(_))));
    let n = simulate(&a, &Limits::default()).unwrap();
    assert!(Npta::from_apta(&n.as_apta(), 10_000).is_ok());
}

fn project_formula(text: &str, hidden: &[&str], s: &Kripke, ab: &Alphabet) -> Apta {
    let f = parse_formula(text).unwrap();
    let n = simulate(&ctl_apta(&f, s, ab), &Limits::default()).unwrap();
    let hidden: BTreeSet<Prop> = props(hidden).into_iter().collect();
    project(&n, &hidden).as_apta()
}

#[test]
fn projection_examples() {
    let ab = Alphabet::new(props(&["p", "q"]));
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let ps = props(&["p", "q"]);
    for _ in 0..50 {
        let s = crate::random::structure(&mut rng, 1..=4, &ps, 3);
        let q_everywhere = s.reachable(0).iter().all(|&t| s.has_label(t, ps[1]));
        // nothing hidden: unchanged language
        let f = parse_formula("A G (p | q)").unwrap();
        let plain = member(&ctl_apta(&f, &s, &ab), &s);
        assert_eq!(member(&project_formula("A G (p | q)", &[], &s, &ab), &s), plain);
        assert!(member(&project_formula("A G p", &["p"], &s, &ab), &s));
        assert_eq!(member(&project_formula("A G (p & q)", &["p"], &s, &ab), &s), q_everywhere);
    }
}

/// A structure-semantics witness is also a tree witness, so whenever the
/// quantified formula holds on the structure the projection accepts.
#[test]
fn projection_accepts_structure_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ps = props(&["p", "z"]);
    let ab = Alphabet::new(ps.clone());
    let z = Prop::new("z");
    let mut agreed = 0;
    for _ in 0..120 {
        let s = crate::random::structure(&mut rng, 1..=3, &ps[..1], 2);
        let body = crate::random::ctl(&mut rng, 3, &ps);
        let a = project(&simulate(&ctl_apta(&body, &s, &ab), &Limits::default()).unwrap(), &[z].into());
        let tree = member(&a.as_apta(), &s);
        let structure = check(&s, 0, &Formula::exists1(z, body.clone()), &CheckOptions::default()).unwrap();
        assert!(!structure || tree, "∃z.{body}");
        agreed += (structure == tree) as usize;
    }
    assert!(agreed > 60);
}

#[test]
fn simulated_size_is_bounded() {
    let s = parse_structure("state a { p }\nstate b\nedge a b\nedge a a\nedge b a").unwrap();
    let ab = Alphabet::new(props(&["p", "q"]));
    let f = parse_formula("A G (E F p & E F !p) & E [p U q]").unwrap();
    let a = ctl_apta(&f, &s, &ab);
    let e = a.materialize(1000).unwrap();
    let n = simulate(&a, &Limits::default()).unwrap().as_apta();
    let m = n.materialize(100_000).unwrap();
    assert!(m.len() <= 1 << (2 * e.len()), "{} states from {}", m.len(), e.len());
}
