//! Acceptance suite: one line per criterion, each checked against an
//! independent oracle under a wall-clock limit.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qctl::automata::{
    accepts, ctl_to_apta, dual, project, simulate_with, AcceptanceKind, Alphabet, Apta, Explicit, Limits,
    Npta, Pbf, SimulationMethod,
};
use qctl::corpus::{
    acyclic, build_grid, circuit_to_mc, delimiters, ex1, ex_geq, grid1d, grid2d, qbf_to_mc, selfloop, uniq,
    yardstick0, Circuit, Gate, Literal, QbfInstance,
};
use qctl::games::{brute_solve, solve, ParityGame, Player};
use qctl::kripke::{parse_structure, Kripke, StateId};
use qctl::logic::{is_prenex, negation_normal_form, parse_formula, Formula, Prop};
use qctl::mc_structure::{brute_force_sat, check, eval_mso, sat_set, CheckOptions, HintMode, BRUTE_MAX_DEPTH};
use qctl::mc_tree::{check_tree, TreeChecker};
use qctl::sat_tree::{sat, SatResult};
use qctl::transforms::{mso_to_qctl, prenex, MsoSemantics};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn props(names: &[&str]) -> Vec<Prop> {
    names.iter().map(|n| Prop::new(n)).collect()
}

fn structure(text: &str) -> Kripke {
    parse_structure(text).expect("fixture parses")
}

fn s0() -> Kripke {
    structure("state q0 { r }\nstate q1\nedge q0 q0\nedge q0 q1\nedge q1 q0\nedge q1 q1\ninit q0")
}

fn holds(s: &Kripke, q: StateId, f: &Formula) -> bool {
    check(s, q, f, &CheckOptions::default()).expect("within budget")
}

// 1
fn engine_matches_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let ps = props(&["p", "q"]);
    let n = 500;
    for i in 0..n {
        let s = qctl::random::structure(&mut rng, 1..=5, &ps, 3);
        let f = qctl::random::qctl(&mut rng, 4, &ps, 2);
        let engine = sat_set(&s, &f, &CheckOptions::default()).map_err(|e| e.to_string())?;
        for q in s.states() {
            let oracle = brute_force_sat(&s, q, &f).map_err(|e| e.to_string())?;
            ensure(engine.contains(q) == oracle, || format!("case {i}: {f} at {} on\n{s}", s.name(q)))?;
        }
    }
    Ok(format!("{n}/{n} instances agree at every state"))
}

// 2
/// Prenex forms of random formulas can bind a dozen or more propositions,
/// beyond any exhaustive check; instances whose prefix binds more than
/// `MAX_BOUND` propositions are drawn again and counted.
fn prenex_is_sound() -> Verdict {
    const MAX_BOUND: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let ps = props(&["p", "q"]);
    let (n, mut checked, mut skipped, mut brute_pairs) = (200, 0, 0, 0);
    while checked < n {
        let s = qctl::random::structure(&mut rng, 1..=3, &ps, 3);
        let f = qctl::random::qctl(&mut rng, 4, &ps, 2);
        let g = prenex(&f).map_err(|e| e.to_string())?;
        ensure(is_prenex(&g), || format!("{g} is not prenex"))?;
        if g.bound_props().len() > MAX_BOUND {
            skipped += 1;
            continue;
        }
        checked += 1;
        let direct = qctl::logic::quantifier_depth(&g) <= BRUTE_MAX_DEPTH;
        brute_pairs += direct as usize;
        let rewritten = sat_set(&s, &g, &CheckOptions::default()).map_err(|e| e.to_string())?;
        for q in s.states() {
            let expected = brute_force_sat(&s, q, &f).map_err(|e| e.to_string())?;
            // deeper prefixes are evaluated by the engine validated in criterion 1
            let got = if direct {
                brute_force_sat(&s, q, &g).map_err(|e| e.to_string())?
            } else {
                rewritten.contains(q)
            };
            ensure(got == expected && rewritten.contains(q) == expected, || {
                format!("{f} vs {g} at {} on\n{s}", s.name(q))
            })?;
        }
    }
    Ok(format!(
        "{n}/{n} equivalent, all prenex ({brute_pairs} fully brute-forced, {skipped} redrawn for prefixes over {MAX_BOUND} props)"
    ))
}

// 3
fn ctl_agrees_across_semantics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let ps = props(&["p", "q"]);
    let n = 200;
    for i in 0..n {
        let s = qctl::random::structure(&mut rng, 1..=5, &ps, 3);
        let f = qctl::random::ctl(&mut rng, 4, &ps);
        let tree = check_tree(&s, 0, &f).map_err(|e| e.to_string())?;
        ensure(tree == holds(&s, 0, &f), || format!("case {i}: {f} on\n{s}"))?;
    }
    Ok(format!("{n}/{n} agree"))
}

// 4
fn truth_dichotomies() -> Verdict {
    let fixtures = [
        s0(),
        structure("state a\nstate b\nedge a b\nedge b a"),
        structure("state a { p }\nstate b\nstate c\nedge a b\nedge a c\nedge b b\nedge c a"),
        structure("state a\nedge a a"),
    ];
    for s in &fixtures {
        for q in s.states() {
            let looped = s.succ(q).contains(&q);
            ensure(holds(s, q, &selfloop()) == looped, || format!("selfloop at {} on\n{s}", s.name(q)))?;
            ensure(!check_tree(s, q, &selfloop()).unwrap(), || format!("tree selfloop at {}", s.name(q)))?;
            ensure(!holds(s, q, &acyclic()), || format!("structure acyclic at {}", s.name(q)))?;
            ensure(check_tree(s, q, &acyclic()).unwrap(), || format!("tree acyclic at {}", s.name(q)))?;
        }
    }
    let s = s0();
    let inner = parse_formula("E X (forall p. (E F p -> p))").unwrap();
    let outer = parse_formula("exists z. forall p. E X (z & (E F p -> p))").unwrap();
    ensure(!holds(&s, 0, &inner), || "EX(forall p...) should be false".into())?;
    ensure(holds(&s, 0, &outer), || "exists z. forall p. EX(...) should be true".into())?;
    Ok(format!("{} fixtures, both semantics, plus the quantifier-placement pair", fixtures.len()))
}

// 5
fn mso_translation_agrees() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let ps = props(&["p"]);
    let n = 100;
    for i in 0..n {
        let s = qctl::random::structure(&mut rng, 1..=4, &ps, 2);
        let phi = qctl::random::mso(&mut rng, 4, &ps, 1, 1);
        let f = mso_to_qctl(&phi, MsoSemantics::Structure).map_err(|e| e.to_string())?;
        for q in s.states() {
            let direct = eval_mso(&s, q, &phi, &BTreeMap::new()).map_err(|e| e.to_string())?;
            ensure(holds(&s, q, &f) == direct, || format!("case {i}: {phi} at {} on\n{s}", s.name(q)))?;
        }
    }
    Ok(format!("{n}/{n} formulas agree at every state"))
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
    let (a, b) = (random_pbf(rng, depth - 1, degree, states), random_pbf(rng, depth - 1, degree, states));
    if roll < 7 {
        Pbf::and(a, b)
    } else {
        Pbf::or(a, b)
    }
}

fn random_parity_apta(rng: &mut impl Rng, states: usize) -> Apta {
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
        priorities: (0..states).map(|_| rng.gen_range(0..4)).collect(),
        trans,
        kind: AcceptanceKind::Parity,
    };
    Apta::new(Rc::new(e), ab, &degrees)
}

/// Does some relabelling of `hidden` on the unwinding of `s` from `root`
/// belong to `n`? Solved as a game in which the labeller moves with the
/// automaton: nondeterministic runs visit each node with a single state,
/// so choosing the hidden bits per game position is choosing them per node.
fn relabelling_accepted(n: &Npta, hidden: &BTreeSet<Prop>, s: &Kripke, root: StateId) -> bool {
    let ab = n.alphabet();
    let hide = ab.mask(hidden.iter().copied());
    let variants = ab.letters_within(hide);
    let mut g = ParityGame::new();
    let top = 1 << 20;
    let sink = g.add_position(Player::Even, 1);
    g.add_edge(sink, sink);
    let mut ids: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut node = |g: &mut ParityGame, queue: &mut VecDeque<_>, key: (StateId, usize)| {
        *ids.entry(key).or_insert_with(|| {
            let id = g.add_position(Player::Even, n.priority(key.1));
            queue.push_back((key, id));
            id
        })
    };
    let start = node(&mut g, &mut queue, (root, n.initial()));
    while let Some(((q, a), me)) = queue.pop_front() {
        let base = ab.letter(s.labels(q)) & !hide;
        let mut moved = false;
        for &v in &variants {
            for tuple in n.choices(a, base | v, s.degree(q)).unwrap().iter() {
                let pick = g.add_position(Player::Odd, top);
                g.add_edge(me, pick);
                for (i, &b) in tuple.iter().enumerate() {
                    let child = node(&mut g, &mut queue, (s.succ(q)[i], b));
                    g.add_edge(pick, child);
                }
                moved = true;
            }
        }
        if !moved {
            g.add_edge(me, sink);
        }
    }
    solve(&g).winner[start] == Player::Even
}

// 6
fn automata_pipeline_is_consistent() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let limits = Limits::default();
    let ps = props(&["p", "z"]);
    let ab = Alphabet::new(ps.clone());
    let hidden: BTreeSet<Prop> = [Prop::new("z")].into();
    let (n, mut accepted) = (60, [0usize; 3]);
    for i in 0..n {
        // simulation, breakpoint kind: CTL automata
        let s = qctl::random::structure(&mut rng, 1..=4, &ps[..1], 3);
        let f = negation_normal_form(&qctl::random::ctl(&mut rng, 3, &ps)).unwrap();
        let a = ctl_to_apta(&f, ab.clone(), &s.degrees_from(0)).unwrap();
        let member = accepts(&a, &s, 0, &limits).unwrap();
        let nd = simulate_with(&a, SimulationMethod::Breakpoint, &limits).map_err(|e| e.to_string())?;
        ensure(accepts(&nd.as_apta(), &s, 0, &limits).unwrap() == member, || format!("simulate, case {i}: {f}"))?;
        ensure(accepts(&dual(&a), &s, 0, &limits).unwrap() != member, || format!("dual, case {i}: {f}"))?;
        accepted[0] += member as usize;

        // simulation, Safra kind: arbitrary parity automata
        let r = random_parity_apta(&mut rng, 3);
        let rs = qctl::random::structure(&mut rng, 1..=4, &ps[..1], 3);
        let member = accepts(&r, &rs, 0, &limits).unwrap();
        let nr = simulate_with(&r, SimulationMethod::Safra, &limits).map_err(|e| e.to_string())?;
        ensure(accepts(&nr.as_apta(), &rs, 0, &limits).unwrap() == member, || format!("safra, case {i}"))?;
        ensure(accepts(&dual(&r), &rs, 0, &limits).unwrap() != member, || format!("dual parity, case {i}"))?;
        accepted[1] += member as usize;

        // projection: exact relabelling oracle
        let proj = project(&nd, &hidden).as_apta();
        let got = accepts(&proj, &s, 0, &limits).unwrap();
        ensure(got == relabelling_accepted(&nd, &hidden, &s, 0), || format!("project, case {i}: {f}"))?;
        accepted[2] += got as usize;
    }
    Ok(format!(
        "{n} trees each for breakpoint/safra/projection, accepted {}/{}/{}; dual complements on all",
        accepted[0], accepted[1], accepted[2]
    ))
}

// 7
fn zielonka_matches_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let n = 300;
    for i in 0..n {
        let g = qctl::random::game(&mut rng, 7, 3);
        let oracle = brute_solve(&g).map_err(|e| e.to_string())?;
        ensure(solve(&g).winner == oracle.winner, || format!("game {i}: {g:?}"))?;
    }
    Ok(format!("{n}/{n} games agree"))
}

fn sat_witness(f: &Formula) -> Result<Option<(Kripke, StateId)>, String> {
    match sat(f).map_err(|e| e.to_string())? {
        SatResult::Unsat => Ok(None),
        SatResult::Sat(w) => {
            let ok = check_tree(&w.structure, w.root, f).map_err(|e| e.to_string())?;
            ensure(ok, || format!("witness for {f} does not re-verify"))?;
            Ok(Some((w.structure, w.root)))
        }
    }
}

// 8
fn satisfiability_is_self_consistent() -> Verdict {
    let p = Formula::prop("p");
    let expected = [
        ("p & A G !p", parse_formula("p & A G !p").unwrap(), false),
        ("selfloop", selfloop(), false),
        ("acyclic", acyclic(), true),
        ("uniq(p)", uniq(&p), true),
    ];
    for (name, f, verdict) in &expected {
        let w = sat_witness(f)?;
        ensure(w.is_some() == *verdict, || format!("{name}: expected sat = {verdict}"))?;
    }
    let (s, t) = (Prop::new("s"), Prop::new("t"));
    let f = Formula::and(delimiters(s, t), yardstick0(3, s, t));
    let (k, root) = sat_witness(&f)?.ok_or("delimiters & yardstick0(3) reported unsat")?;
    let mut paths = vec![vec![root]];
    for _ in 0..6 {
        paths = paths
            .into_iter()
            .flat_map(|p| k.succ(*p.last().unwrap()).iter().map(move |&v| [p.clone(), vec![v]].concat()))
            .collect();
    }
    let mut marks = 0;
    for p in &paths {
        for i in (0..p.len()).filter(|&i| k.has_label(p[i], s) && i + 3 < p.len()) {
            marks += 1;
            let at = |j: usize| k.has_label(p[i + j], t);
            ensure(at(3) && !at(1) && !at(2), || format!("branch {p:?} breaks distance 3"))?;
        }
    }
    ensure(marks > 0, || "no s marker within depth 3".into())?;
    Ok(format!("4 corpus verdicts, yardstick witness with {} branch(es) to depth 6", paths.len()))
}

fn qbf_truth(inst: &QbfInstance) -> bool {
    let vars: Vec<&String> = inst.blocks.iter().flatten().collect();
    let value = |assign: &BTreeMap<&str, bool>| {
        let lit = |l: &Literal| assign[l.var.as_str()] == l.positive;
        if inst.is_cnf() {
            inst.matrix.iter().all(|c| c.iter().any(lit))
        } else {
            inst.matrix.iter().any(|t| t.iter().all(lit))
        }
    };
    fn go<'a>(
        blocks: &'a [Vec<String>],
        level: usize,
        assign: &mut BTreeMap<&'a str, bool>,
        value: &dyn Fn(&BTreeMap<&str, bool>) -> bool,
    ) -> bool {
        let Some(block) = blocks.get(level) else {
            return value(assign);
        };
        let mut outcomes = (0..1u32 << block.len()).map(|bits| {
            for (i, v) in block.iter().enumerate() {
                assign.insert(v, bits >> i & 1 == 1);
            }
            go(blocks, level + 1, assign, value)
        });
        if level.is_multiple_of(2) {
            outcomes.any(|b| b)
        } else {
            outcomes.all(|b| b)
        }
    }
    debug_assert!(!vars.is_empty());
    go(&inst.blocks, 0, &mut BTreeMap::new(), &value)
}

fn random_qbf(rng: &mut impl Rng, k: usize) -> QbfInstance {
    let mut vars: Vec<String> = (0..3).map(|i| format!("x{i}")).collect();
    vars.shuffle(rng);
    let blocks = if k == 1 {
        vec![vars.clone()]
    } else {
        let cut = rng.gen_range(1..3);
        vec![vars[..cut].to_vec(), vars[cut..].to_vec()]
    };
    let matrix = (0..3)
        .map(|_| {
            let width = rng.gen_range(1..=3);
            vars.choose_multiple(rng, width)
                .map(|v| Literal {
                    var: v.clone(),
                    positive: rng.gen_bool(0.5),
                })
                .collect()
        })
        .collect();
    QbfInstance { blocks, matrix }
}

fn circuit_value(c: &Circuit, i: usize) -> bool {
    match &c.gates[i] {
        Gate::One => true,
        Gate::Zero => false,
        Gate::And(ins) => ins.iter().all(|&j| circuit_value(c, j)),
        Gate::Or(ins) => ins.iter().any(|&j| circuit_value(c, j)),
        Gate::Not(j) => !circuit_value(c, *j),
    }
}

fn random_circuit(rng: &mut impl Rng) -> Circuit {
    let n = rng.gen_range(1..=10);
    let gates = (0..n)
        .map(|i| {
            let later = n - i - 1;
            if later == 0 || rng.gen_bool(0.2) {
                return if rng.gen_bool(0.5) { Gate::One } else { Gate::Zero };
            }
            let ins = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(i + 1..n)).collect();
            if rng.gen_bool(0.5) {
                Gate::And(ins)
            } else {
                Gate::Or(ins)
            }
        })
        .collect();
    Circuit { gates }
}

// 9
fn reductions_match_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let mut truths = [0usize; 2];
    for i in 0..120 {
        let k = 1 + i % 2;
        let inst = random_qbf(&mut rng, k);
        let (s, f) = qbf_to_mc(&inst).map_err(|e| e.to_string())?;
        let expected = qbf_truth(&inst);
        ensure(holds(&s, 0, &f) == expected, || format!("qbf case {i}: {inst:?}"))?;
        truths[k - 1] += expected as usize;
    }
    let (fig, f) = circuit_to_mc(&Circuit::example()).unwrap();
    ensure(holds(&fig, 0, &f) && check_tree(&fig, 0, &f).unwrap(), || "example circuit must be 1".into())?;
    let mut ones = 0;
    let mut tree = TreeChecker::new(&f, Limits::default()).map_err(|e| e.to_string())?;
    for i in 0..60 {
        let c = random_circuit(&mut rng);
        let (s, f) = circuit_to_mc(&c).map_err(|e| e.to_string())?;
        let v = circuit_value(&c, 0);
        ensure(holds(&s, 0, &f) == v, || format!("circuit {i} (structure): {c:?}"))?;
        ensure(tree.check(&s, 0).map_err(|e| e.to_string())? == v, || format!("circuit {i} (tree): {c:?}"))?;
        ones += v as usize;
    }
    Ok(format!(
        "120 QBF instances ({}/{} true for k=1/k=2), 60 random circuits ({ones} evaluate to 1) plus the example",
        truths[0], truths[1]
    ))
}

fn line(n: usize) -> Kripke {
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("state l{i}\nedge l{i} l{}\n", (i + 1).min(n - 1)));
    }
    structure(&text)
}

// 10
fn grid_characterisation() -> Verdict {
    let f = grid2d();
    for (m, n) in [(2, 2), (2, 3), (3, 3)] {
        let (s, witness) = build_grid(m, n);
        let opts = CheckOptions {
            hints: vec![witness],
            hint_mode: HintMode::Only,
            ..CheckOptions::default()
        };
        let ok = check(&s, 0, &f, &opts).map_err(|e| e.to_string())?;
        ensure(ok, || format!("grid2d fails on the {m}x{n} grid"))?;
    }
    let g = grid1d();
    for n in 2..=5 {
        ensure(holds(&line(n), 0, &g), || format!("grid1d fails on L_{n}"))?;
    }
    let others = [
        s0(),
        structure("state a\nstate b\nstate c\nedge a b\nedge a c\nedge b b\nedge c c"),
        structure("state a\nstate b\nstate c\nedge a b\nedge b c\nedge c a"),
        structure("state a\nstate b\nstate c\nedge a b\nedge b c\nedge c b"),
    ];
    for s in &others {
        ensure(!holds(s, 0, &g), || format!("grid1d holds on a non-line:\n{s}"))?;
    }
    Ok(format!("grid2d on 2x2, 2x3, 3x3; grid1d on L_2..L_5 and {} non-lines", others.len()))
}

// 11
fn counting_formulas() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let p = Prop::new("p");
    let phi = Formula::atom(p);
    let formulas: Vec<(Option<usize>, Formula)> = std::iter::once((None, ex1(&phi)))
        .chain((1..=3).map(|k| (Some(k), ex_geq(k, &phi))))
        .collect();
    let mut trees: Vec<TreeChecker> = formulas
        .iter()
        .map(|(_, f)| TreeChecker::new(f, Limits::default()).unwrap())
        .collect();
    let n = 100;
    for i in 0..n {
        let s = qctl::random::structure(&mut rng, 1..=5, &[p], 4);
        for q in s.states() {
            let count = s.succ(q).iter().filter(|&&t| s.has_label(t, p)).count();
            for ((k, f), tree) in formulas.iter().zip(&mut trees) {
                let expected = match k {
                    None => count == 1,
                    Some(k) => count >= *k,
                };
                ensure(holds(&s, q, f) == expected, || format!("case {i}: structure {f} at {}", s.name(q)))?;
                let t = tree.check(&s, q).map_err(|e| e.to_string())?;
                ensure(t == expected, || format!("case {i}: tree {f} at {}", s.name(q)))?;
            }
        }
    }
    Ok(format!("{n} structures, every state, EX1 and EXgeq(1..3), both semantics"))
}

type Criterion = (&'static str, u64, fn() -> Verdict);

const CRITERIA: [Criterion; 11] = [
    ("engine vs brute-force oracle", 120, engine_matches_brute_force),
    ("prenex soundness", 300, prenex_is_sound),
    ("CTL invariance across semantics", 300, ctl_agrees_across_semantics),
    ("truth dichotomies", 4, truth_dichotomies),
    ("MSO translation", 600, mso_translation_agrees),
    ("automata pipeline consistency", 600, automata_pipeline_is_consistent),
    ("parity solver vs brute force", 60, zielonka_matches_brute_force),
    ("satisfiability self-consistency", 300, satisfiability_is_self_consistent),
    ("reduction oracles", 300, reductions_match_oracles),
    ("grid characterisation", 600, grid_characterisation),
    ("counting formulas", 120, counting_formulas),
];

fn main() -> ExitCode {
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, limit, run)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit}s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        failed += (status == "FAIL") as usize;
        println!("criterion {id:>2} [{status}] {name}: {detail} ({:.2}s)", took.as_secs_f64());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
