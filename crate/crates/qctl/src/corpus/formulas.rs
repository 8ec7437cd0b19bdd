//! Named formulas: counting and uniqueness gadgets, the two truth
//! dichotomies, marker/yardstick families and the grid characterisations.

use std::collections::BTreeSet;

use crate::logic::{Formula, Prop};

/// `base` itself when unused in `avoid`, otherwise `base1`, `base2`, ...
pub fn fresh_named(base: &str, avoid: &BTreeSet<Prop>) -> Prop {
    let p = Prop::new(base);
    if !avoid.contains(&p) {
        return p;
    }
    (1..)
        .map(|i| Prop::new(&format!("{base}{i}")))
        .find(|p| !avoid.contains(p))
        .expect("infinitely many candidates")
}

fn atom(p: Prop) -> Formula {
    Formula::atom(p)
}

fn not(f: Formula) -> Formula {
    Formula::not(f)
}

/// `∀z.(z → EX z)`: the state carries a self-loop (structure semantics).
pub fn selfloop() -> Formula {
    let z = Prop::new("z");
    Formula::forall1(z, Formula::implies(atom(z), Formula::ex(atom(z))))
}

/// `EF φ ∧ ∀z.(EF(φ ∧ z) → AG(φ → z))`: exactly one reachable state (or tree
/// node) satisfies `φ`.
pub fn uniq(phi: &Formula) -> Formula {
    let z = fresh_named("z", &phi.all_props());
    Formula::and(
        Formula::ef(phi.clone()),
        Formula::forall1(
            z,
            Formula::implies(
                Formula::ef(Formula::and(phi.clone(), atom(z))),
                Formula::ag(Formula::implies(phi.clone(), atom(z))),
            ),
        ),
    )
}

/// `EX φ ∧ ∀z.(EX(φ ∧ z) → AX(φ → z))`: exactly one successor satisfies `φ`.
pub fn ex1(phi: &Formula) -> Formula {
    let z = fresh_named("z", &phi.all_props());
    Formula::and(
        Formula::ex(phi.clone()),
        Formula::forall1(
            z,
            Formula::implies(
                Formula::ex(Formula::and(phi.clone(), atom(z))),
                Formula::ax(Formula::implies(phi.clone(), atom(z))),
            ),
        ),
    )
}

/// At least `k` successors satisfy `φ`: `∃p1..pk. AX(⋀_{i<j} ¬pi ∨ ¬pj) ∧ ⋀_i EX(pi ∧ φ)`.
pub fn ex_geq(k: usize, phi: &Formula) -> Formula {
    if k == 0 {
        return Formula::True;
    }
    let mut avoid = phi.all_props();
    let ps: Vec<Prop> = (1..=k)
        .map(|i| {
            let p = fresh_named(&format!("p{i}"), &avoid);
            avoid.insert(p);
            p
        })
        .collect();
    let mut disjoint = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            disjoint.push(Formula::or(not(atom(ps[i])), not(atom(ps[j]))));
        }
    }
    let marked = ps.iter().map(|&p| Formula::ex(Formula::and(atom(p), phi.clone())));
    Formula::exists(
        ps.clone(),
        Formula::and(Formula::ax(Formula::conj(disjoint)), Formula::conj(marked)),
    )
}

/// `AG ∃z.(z ∧ uniq(z) ∧ AX AG ¬z)`: every path is acyclic. False on every
/// finite structure, true on every tree.
pub fn acyclic() -> Formula {
    let z = Prop::new("z");
    Formula::ag(Formula::exists1(
        z,
        Formula::conj([atom(z), uniq(&atom(z)), Formula::ax(Formula::ag(not(atom(z))))]),
    ))
}

/// `AF φ ∧ AG(φ → AX AG ¬φ)`
pub fn once(phi: &Formula) -> Formula {
    Formula::and(
        Formula::af(phi.clone()),
        Formula::ag(Formula::implies(phi.clone(), Formula::ax(Formula::ag(not(phi.clone()))))),
    )
}

/// Exactly one `s` followed by exactly one `t` on every branch.
pub fn delimiters(s: Prop, t: Prop) -> Formula {
    Formula::conj([
        once(&atom(s)),
        once(&atom(t)),
        Formula::ag(Formula::implies(atom(s), Formula::af(atom(t)))),
    ])
}

/// `AG(s → ((AX)^n t ∧ ⋀_{k<n} (AX)^k ¬t))`
pub fn yardstick0(n: usize, s: Prop, t: Prop) -> Formula {
    let before = (0..n).map(|k| Formula::ax_pow(k, not(atom(t))));
    Formula::ag(Formula::implies(
        atom(s),
        Formula::and(Formula::ax_pow(n, atom(t)), Formula::conj(before)),
    ))
}

fn level_prop(base: &str, k: usize) -> Prop {
    Prop::new(&format!("{base}_{k}"))
}

/// Forces distance `F(k, n)` between `s` and `t` on every branch where both
/// occur once. Level `k` quantifies `r_k`, `c_k` (and `u_k`, `v_k` for
/// `k ≥ 2`).
pub fn yardstick(k: usize, n: usize, s: Prop, t: Prop) -> Formula {
    if k == 0 {
        return yardstick0(n, s, t);
    }
    let r = level_prop("r", k);
    let c = level_prop("c", k);
    Formula::exists1(
        r,
        Formula::exists1(c, Formula::and(graduation(k, n, r, s, t), counter(k, n, c, r, s, t))),
    )
}

/// Guard `delimiters(u,v) ∧ yardstick_{k-1}(u,v)` shared by the level-`k`
/// graduation and increment formulas.
fn unit_interval(k: usize, n: usize, u: Prop, v: Prop) -> Formula {
    Formula::and(delimiters(u, v), yardstick(k - 1, n, u, v))
}

pub fn graduation(k: usize, n: usize, r: Prop, s: Prop, t: Prop) -> Formula {
    assert!(k >= 1, "graduations start at level 1");
    let ends = Formula::ag(Formula::implies(Formula::or(atom(s), atom(t)), atom(r)));
    if k == 1 {
        return Formula::and(ends, yardstick0(n, r, r));
    }
    let (u, v) = (level_prop("u", k), level_prop("v", k));
    let one_r = Formula::and(
        Formula::ag(Formula::implies(
            atom(u),
            Formula::af(Formula::and(atom(r), Formula::af(atom(v)))),
        )),
        Formula::ag(Formula::implies(
            Formula::conj([atom(r), Formula::af(atom(v)), not(Formula::af(atom(u)))]),
            Formula::ax(Formula::au(not(atom(r)), atom(v))),
        )),
    );
    Formula::and(
        ends,
        Formula::forall1(
            u,
            Formula::forall1(v, Formula::implies(unit_interval(k, n, u, v), one_r)),
        ),
    )
}

pub fn counter(k: usize, n: usize, c: Prop, r: Prop, s: Prop, t: Prop) -> Formula {
    Formula::conj([zeros(c, r, s), ones(c, r, t), increment(k, n, c, r, s)])
}

/// `AG(s ↔ (r ∧ ¬c ∧ AX A(¬c U r)))`
pub fn zeros(c: Prop, r: Prop, s: Prop) -> Formula {
    Formula::ag(Formula::iff(
        atom(s),
        Formula::conj([atom(r), not(atom(c)), Formula::ax(Formula::au(not(atom(c)), atom(r)))]),
    ))
}

/// `AG((r ∧ AX A(¬r U t)) → A(c U t))`
pub fn ones(c: Prop, r: Prop, t: Prop) -> Formula {
    Formula::ag(Formula::implies(
        Formula::and(atom(r), Formula::ax(Formula::au(not(atom(r)), atom(t)))),
        Formula::au(atom(c), atom(t)),
    ))
}

/// `AX A(¬r U (¬c ∧ ¬r))`: a zero follows before the next graduation.
fn zero_ahead(c: Prop, r: Prop) -> Formula {
    Formula::ax(Formula::au(not(atom(r)), Formula::and(not(atom(c)), not(atom(r)))))
}

pub fn increment(k: usize, n: usize, c: Prop, r: Prop, s: Prop) -> Formula {
    assert!(k >= 1, "counters start at level 1");
    if k == 1 {
        return Formula::ag(Formula::implies(
            atom(s),
            Formula::ag(Formula::iff(
                Formula::iff(atom(c), Formula::ax_pow(n, atom(c))),
                zero_ahead(c, r),
            )),
        ));
    }
    let (u, v) = (level_prop("u", k), level_prop("v", k));
    let step = Formula::ag(Formula::implies(
        Formula::and(atom(s), Formula::af(atom(u))),
        Formula::ag(Formula::iff(
            Formula::iff(
                Formula::and(atom(u), atom(c)),
                Formula::ag(Formula::implies(atom(v), atom(c))),
            ),
            zero_ahead(c, r),
        )),
    ));
    Formula::forall1(
        u,
        Formula::forall1(v, Formula::implies(unit_interval(k, n, u, v), step)),
    )
}

/// `∃r.∀γ. AG(EX⊤ ∧ (EXγ → AXγ)) ∧ (EF(r ∧ γ) → AG(r → γ)) ∧ EF AG r`:
/// the reachable part is a line ending in a self-loop.
pub fn grid1d() -> Formula {
    let (r, g) = (Prop::new("r"), Prop::new("gamma"));
    Formula::exists1(
        r,
        Formula::forall1(
            g,
            Formula::conj([
                Formula::ag(Formula::and(
                    Formula::ex(Formula::True),
                    Formula::implies(Formula::ex(atom(g)), Formula::ax(atom(g))),
                )),
                Formula::implies(
                    Formula::ef(Formula::and(atom(r), atom(g))),
                    Formula::ag(Formula::implies(atom(r), atom(g))),
                ),
                Formula::ef(Formula::ag(atom(r))),
            ]),
        ),
    )
}

/// Propositions labelling a grid witness, in quantification order.
pub const GRID_PROPS: [&str; 7] = ["s", "h", "v", "l", "r", "t", "b"];

/// The two literals `{p, ¬p}`.
fn both(p: Prop) -> [Formula; 2] {
    [atom(p), not(atom(p))]
}

/// Negation that folds `¬¬p` back to `p`.
fn flip(f: &Formula) -> Formula {
    match f {
        Formula::Not(g) => (**g).clone(),
        g => not(g.clone()),
    }
}

/// The conjuncts of the two-dimensional grid characterisation, unquantified
/// over the witness propositions.
pub fn grid2d_conjuncts() -> Vec<Formula> {
    let [s, h, v, l, r, t, b] = GRID_PROPS.map(Prop::new);
    let (alpha, beta, gamma) = (Prop::new("alpha"), Prop::new("beta"), Prop::new("gamma"));
    let g = || atom(gamma);
    let mut out = Vec::new();

    // At least one successor, at most two, and two successors differ on h and v.
    let mut split = Vec::new();
    for hs in both(h) {
        for vs in both(v) {
            split.push(Formula::implies(
                Formula::and(hs.clone(), vs.clone()),
                Formula::and(
                    Formula::ex(Formula::and(flip(&hs), vs.clone())),
                    Formula::ex(Formula::and(hs.clone(), flip(&vs))),
                ),
            ));
        }
    }
    out.push(Formula::and(
        Formula::ag(Formula::ex(Formula::True)),
        Formula::forall(
            vec![alpha, beta],
            Formula::ag(Formula::implies(
                Formula::and(
                    Formula::ex(Formula::and(atom(alpha), atom(beta))),
                    Formula::ex(Formula::and(atom(alpha), not(atom(beta)))),
                ),
                Formula::and(Formula::ax(atom(alpha)), Formula::conj(split)),
            )),
        ),
    ));

    // A single sink with a self-loop, reached on every path.
    out.push(Formula::conj([
        uniq(&atom(s)),
        Formula::ag(Formula::implies(atom(s), Formula::ag(atom(s)))),
        Formula::af(atom(s)),
    ]));

    // Initial state: one horizontal and one vertical successor.
    out.push(Formula::conj([
        Formula::and(atom(h), atom(v)),
        Formula::ex(Formula::and(atom(h), not(atom(v)))),
        Formula::ex(Formula::and(not(atom(h)), atom(v))),
    ]));

    let dirs = [atom(h), not(atom(h)), atom(v), not(atom(v))];

    // Two successors have a common successor.
    let squares = dirs.iter().map(|d| {
        let nd = flip(d);
        Formula::implies(
            Formula::conj([d.clone(), Formula::ex(d.clone()), Formula::ex(nd.clone())]),
            Formula::and(
                Formula::implies(
                    Formula::ex(Formula::and(d.clone(), Formula::ax(g()))),
                    Formula::ex(Formula::and(nd.clone(), Formula::ex(Formula::and(nd.clone(), g())))),
                ),
                Formula::implies(
                    Formula::ex(Formula::and(nd.clone(), Formula::ax(g()))),
                    Formula::ex(Formula::and(d.clone(), Formula::ex(Formula::and(nd.clone(), g())))),
                ),
            ),
        )
    });
    out.push(Formula::forall1(gamma, Formula::ag(Formula::conj(squares))));

    let squares2 = dirs.iter().map(|d| {
        let nd = flip(d);
        Formula::implies(
            d.clone(),
            Formula::iff(
                Formula::ex(Formula::and(d.clone(), Formula::ex(Formula::and(nd.clone(), g())))),
                Formula::ex(Formula::conj([
                    nd.clone(),
                    not(atom(s)),
                    Formula::ex(Formula::and(nd.clone(), g())),
                ])),
            ),
        )
    });
    out.push(Formula::forall1(gamma, Formula::ag(Formula::conj(squares2))));

    // Every state is reached by a horizontal-then-vertical path and by a
    // vertical-then-horizontal path.
    let hv_then = |hq: &Formula, vq: &Formula, hx: &Formula, vx: &Formula, target: Formula| {
        Formula::and(
            Formula::eu(
                hq.clone(),
                Formula::and(hq.clone(), Formula::eu(vx.clone(), Formula::and(vx.clone(), target.clone()))),
            ),
            Formula::eu(
                vq.clone(),
                Formula::and(vq.clone(), Formula::eu(hx.clone(), Formula::and(hx.clone(), target))),
            ),
        )
    };
    let mut reach = Vec::new();
    for hq in both(h) {
        for vq in both(v) {
            for hg in both(h) {
                for vg in both(v) {
                    reach.push(hv_then(&hq, &vq, &hg, &vg, g()));
                }
            }
        }
    }
    out.push(Formula::forall1(
        gamma,
        Formula::implies(Formula::ef(g()), Formula::disj(reach)),
    ));

    let mut to_sink = Vec::new();
    for hs in both(h) {
        for vs in both(v) {
            let mut inner = Vec::new();
            for hq in both(h) {
                for vq in both(v) {
                    inner.push(hv_then(&hq, &vq, &hs, &vs, atom(s)));
                }
            }
            to_sink.push(Formula::ag(Formula::disj(inner)));
        }
    }
    out.push(Formula::disj(to_sink));

    // Borders.
    out.push(Formula::conj([
        Formula::au(Formula::and(atom(v), atom(l)), Formula::and(not(atom(v)), not(atom(l)))),
        Formula::ag(Formula::implies(not(atom(v)), Formula::ag(not(atom(l))))),
        Formula::ag(Formula::iff(
            atom(r),
            Formula::or(Formula::ag(atom(v)), Formula::ag(not(atom(v)))),
        )),
        Formula::au(Formula::and(atom(h), atom(t)), Formula::and(not(atom(h)), not(atom(t)))),
        Formula::ag(Formula::implies(not(atom(h)), Formula::ag(not(atom(t))))),
        Formula::ag(Formula::iff(
            atom(b),
            Formula::or(Formula::ag(atom(h)), Formula::ag(not(atom(h)))),
        )),
    ]));
    out
}

/// `∃s,h,v,l,r,t,b.` over the conjunction of [`grid2d_conjuncts`]: the
/// reachable part is a two-dimensional grid.
pub fn grid2d() -> Formula {
    Formula::exists(
        GRID_PROPS.iter().map(|n| Prop::new(n)).collect(),
        Formula::conj(grid2d_conjuncts()),
    )
}

/// `F(k, n)`: `F(0,n) = n`, `F(k+1,n) = F(k,n) · 2^F(k,n)`. `None` once the
/// exponent no longer fits in memory-sized shifts.
pub fn yardstick_distance(k: usize, n: u64) -> Option<num_bigint::BigUint> {
    use num_bigint::BigUint;
    let mut f = BigUint::from(n);
    for _ in 0..k {
        let e: u64 = (&f).try_into().ok().filter(|&e: &u64| e <= 1 << 24)?;
        f = &f << e;
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{parse_structure, tests::s0};
    use crate::logic::{classify, parse_formula, PrefixClass};
    use crate::mc_structure::{check, CheckOptions};

    fn holds(s: &crate::kripke::Kripke, q: usize, f: &Formula) -> bool {
        check(s, q, f, &CheckOptions::default()).unwrap()
    }

    #[test]
    fn texts() {
        assert_eq!(selfloop().to_string(), "forall z. z -> E X z");
        assert_eq!(
            uniq(&Formula::prop("p")).to_string(),
            "E F p & (forall z. E F (p & z) -> A G (p -> z))"
        );
        assert_eq!(
            uniq(&Formula::prop("z")).to_string(),
            "E F z & (forall z1. E F (z & z1) -> A G (z -> z1))"
        );
    }

    #[test]
    fn uniq_counts_reachable_states() {
        let s = s0();
        assert!(holds(&s, 0, &uniq(&Formula::prop("r"))));
        assert!(!holds(&s, 0, &uniq(&Formula::True)));
    }

    #[test]
    fn grid1d_lines() {
        let line = parse_structure("state a\nstate b\nstate c\nstate d\nedge a b\nedge b c\nedge c d\nedge d d").unwrap();
        assert!(holds(&line, 0, &grid1d()));
        assert!(!holds(&s0(), 0, &grid1d()));
    }

    #[test]
    fn yardstick_classes() {
        let (s, t) = (Prop::new("s"), Prop::new("t"));
        assert_eq!(classify(&yardstick(1, 2, s, t)).prefix_class, PrefixClass::Eq(1));
        let y2 = yardstick(2, 1, s, t);
        assert_eq!(parse_formula(&y2.to_string()).unwrap(), y2);
    }

    #[test]
    fn distances() {
        assert_eq!(yardstick_distance(0, 3).unwrap(), 3u32.into());
        assert_eq!(yardstick_distance(1, 2).unwrap(), 8u32.into());
        assert_eq!(yardstick_distance(2, 1).unwrap(), 8u32.into());
        assert_eq!(yardstick_distance(2, 2).unwrap(), 2048u32.into());
    }

    #[test]
    fn ex_geq_names_avoid_argument() {
        let f = ex_geq(2, &Formula::prop("p1"));
        assert_eq!(f.bound_props().len(), 2);
        assert!(!f.bound_props().contains(&Prop::new("p1")));
    }
}
