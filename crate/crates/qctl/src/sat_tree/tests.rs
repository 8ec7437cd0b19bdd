
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::automata::{accept_all, dual, ctl_to_apta, Alphabet};
use crate::corpus::{acyclic, delimiters, selfloop, uniq, yardstick0};
use crate::logic::{negation_normal_form, parse_formula};
use crate::mc_structure::{check, CheckOptions};
use crate::mc_tree::check_tree;

fn witness(f: &Formula) -> Witness {
    match sat(f).unwrap() {
        SatResult::Sat(w) => *w,
        SatResult::Unsat => panic!("{f} reported unsatisfiable"),
    }
}

fn is_unsat(f: &Formula) -> bool {
    !sat(f).unwrap().is_sat()
}

#[test]
fn corpus_verdicts() {
    assert!(is_unsat(&parse_formula("p & A G !p").unwrap()));
    assert!(is_unsat(&selfloop()));
    for f in [acyclic(), uniq(&Formula::prop("p"))] {
        let w = witness(&f);
        assert!(check_tree(&w.structure, w.root, &f).unwrap(), "{f}");
    }
}

#[test]
fn encoded_witness_respects_p_int_discipline() {
    let f = parse_formula("E X p & E X !p & E X q").unwrap();
    let w = witness(&f);
    let discipline = parse_formula("!p_int & A G A F !p_int").unwrap();
    let q = w.encoded.init().unwrap();
    assert!(check(&w.encoded, q, &discipline, &CheckOptions::default()).unwrap());
    assert!(w.encoded.states().all(|v| w.encoded.degree(v) <= 2));
    assert!(w.structure.degree(w.root) >= 2);
}

#[test]
fn stripping_outer_exists_keeps_verdicts() {
    for text in ["exists q. (q & A G !q)", "exists q. A G (q | E X q)", "exists z. forall y. (z -> E X y)"] {
        let f = parse_formula(text).unwrap();
        assert_eq!(sat(&f).unwrap().is_sat(), sat(strip_outer_exists(&f)).unwrap().is_sat(), "{f}");
    }
}

#[test]
fn yardstick_witness_has_distance_three() {
    let (s, t) = (Prop::new("s"), Prop::new("t"));
    let f = Formula::and(delimiters(s, t), yardstick0(3, s, t));
    let w = witness(&f);
    let k = &w.structure;
    let mut seen_s = false;
    let mut paths = vec![vec![w.root]];
    for _ in 0..6 {
        paths = paths
            .into_iter()
            .flat_map(|p| k.succ(*p.last().unwrap()).iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    for p in &paths {
        for (i, &v) in p.iter().enumerate() {
            if !k.has_label(v, s) || i + 3 >= p.len() {
                continue;
            }
            seen_s = true;
            assert!(k.has_label(p[i + 3], t));
            assert!(!k.has_label(p[i + 1], t) && !k.has_label(p[i + 2], t));
        }
    }
    assert!(seen_s);
}

#[test]
fn structure_semantics_is_undecidable() {
    assert_eq!(sat_structure(&selfloop()).unwrap_err(), SatError::Undecidable);
}

#[test]
fn emptiness_of_constants() {
    let ab = Alphabet::new([Prop::new("p")]);
    let all = simulate(&accept_all(ab.clone(), &[1, 2]), &Limits::default()).unwrap();
    assert!(emptiness(&all, &Limits::default()).unwrap().is_some());
    let none = simulate(&dual(&accept_all(ab, &[1, 2])), &Limits::default()).unwrap();
    assert!(emptiness(&none, &Limits::default()).unwrap().is_none());
}

/// A model found by bounded search proves non-emptiness; emptiness must then
/// agree, and any witness must be accepted.
#[test]
fn emptiness_against_bounded_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let ps = [Prop::new("p"), Prop::new("q")];
    let ab = Alphabet::new(ps);
    let limits = Limits::default();
    let mut found = 0;
    for _ in 0..30 {
        let f = crate::random::ctl(&mut rng, 3, &ps);
        let a = ctl_to_apta(&negation_normal_form(&f).unwrap(), ab.clone(), &[1, 2]).unwrap();
        let n = simulate(&a, &limits).unwrap();
        let result = emptiness(&n, &limits).unwrap();
        if let Some((k, root)) = &result {
            assert!(crate::automata::accepts(&a, k, *root, &limits).unwrap(), "{f}");
            assert!(check(k, *root, &f, &CheckOptions::default()).unwrap(), "{f}");
        }
        let model = (0..40).any(|_| {
            let s = crate::random::structure(&mut rng, 1..=3, &ps, 2);
            check(&s, 0, &f, &CheckOptions::default()).unwrap()
        });
        if model {
            found += 1;
            assert!(result.is_some(), "{f}");
        }
    }
    assert!(found > 5);
}

#[test]
fn counting_witness_has_three_successors() {
    let f = crate::corpus::ex_geq(3, &Formula::True);
    let w = witness(&f);
    assert!(w.structure.degree(w.root) >= 3);
}
