//! Seedable generators of random instances, used by the property tests and
//! the acceptance suite.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::games::{ParityGame, Player};
use crate::kripke::Kripke;
use crate::logic::{Formula, Prop};
use crate::transforms::Mso;

/// A structure whose size is drawn from `states`; each state gets 1 to
/// `max_degree` distinct successors and a random subset of `props`.
pub fn structure(rng: &mut impl Rng, states: RangeInclusive<usize>, props: &[Prop], max_degree: usize) -> Kripke {
    let states = rng.gen_range(states);
    let mut b = Kripke::builder();
    for i in 0..states {
        let labels: Vec<Prop> = props.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        b.state(&format!("s{i}"), labels).expect("fresh state name");
    }
    for i in 0..states {
        let k = rng.gen_range(1..=max_degree.min(states).max(1));
        let mut targets: Vec<usize> = (0..states).collect();
        targets.shuffle(rng);
        for &t in &targets[..k] {
            b.edge(i, t);
        }
    }
    b.init(0);
    b.build().expect("total by construction")
}

/// A random CTL formula of nesting depth at most `depth`.
pub fn ctl(rng: &mut impl Rng, depth: usize, props: &[Prop]) -> Formula {
    qctl(rng, depth, props, 0)
}

/// A random QCTL formula with at most `quantifiers` quantifier nodes. Bound
/// propositions are named `b0`, `b1`, ... and used in their scope.
pub fn qctl(rng: &mut impl Rng, depth: usize, props: &[Prop], quantifiers: usize) -> Formula {
    let mut g = FormulaGen {
        budget: quantifiers,
        next_binder: 0,
    };
    g.gen(rng, depth, &mut props.to_vec())
}

struct FormulaGen {
    budget: usize,
    next_binder: usize,
}

impl FormulaGen {
    fn gen(&mut self, rng: &mut impl Rng, depth: usize, scope: &mut Vec<Prop>) -> Formula {
        use Formula as F;
        let leaf = |rng: &mut dyn rand::RngCore, scope: &[Prop]| -> Formula {
            match rng.gen_range(0..10) {
                0 => F::True,
                1 => F::False,
                _ if scope.is_empty() => F::True,
                _ => F::atom(scope[rng.gen_range(0..scope.len())]),
            }
        };
        if depth == 0 {
            return leaf(rng, scope);
        }
        if self.budget > 0 && rng.gen_bool(0.35) {
            self.budget -= 1;
            let b = Prop::new(&format!("b{}", self.next_binder));
            self.next_binder += 1;
            scope.push(b);
            let body = self.gen(rng, depth - 1, scope);
            scope.pop();
            return if rng.gen_bool(0.5) {
                F::exists1(b, body)
            } else {
                F::forall1(b, body)
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..16) {
            0 | 1 => leaf(rng, scope),
            2 => F::not(self.gen(rng, d, scope)),
            3 => F::and(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            4 => F::or(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            5 => F::implies(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            6 => F::ex(self.gen(rng, d, scope)),
            7 => F::ax(self.gen(rng, d, scope)),
            8 => F::ef(self.gen(rng, d, scope)),
            9 => F::af(self.gen(rng, d, scope)),
            10 => F::eg(self.gen(rng, d, scope)),
            11 => F::ag(self.gen(rng, d, scope)),
            12 => F::eu(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            13 => F::au(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            14 => F::ew(self.gen(rng, d, scope), self.gen(rng, d, scope)),
            _ => F::aw(self.gen(rng, d, scope), self.gen(rng, d, scope)),
        }
    }
}

/// A random game where every position has 1 to 3 successors.
pub fn game(rng: &mut impl Rng, max_positions: usize, priorities: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_positions);
    let mut g = ParityGame::new();
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) { Player::Even } else { Player::Odd };
        g.add_position(owner, rng.gen_range(0..priorities));
    }
    for v in 0..n {
        for _ in 0..rng.gen_range(1..=3.min(n)) {
            g.add_edge(v, rng.gen_range(0..n));
        }
    }
    g
}

/// A random MSO formula with free variable `x`, using at most `vertex_vars`
/// bound vertex variables (`y0`, `y1`, ...) and `set_vars` bound set
/// variables (`X0`, ...).
pub fn mso(rng: &mut impl Rng, depth: usize, labels: &[Prop], vertex_vars: usize, set_vars: usize) -> Mso {
    let mut g = MsoGen {
        vertex_budget: vertex_vars,
        set_budget: set_vars,
        next: 0,
    };
    g.gen(rng, depth, &mut vec!["x".to_string()], &mut Vec::new(), labels)
}

struct MsoGen {
    vertex_budget: usize,
    set_budget: usize,
    next: usize,
}

impl MsoGen {
    fn gen(
        &mut self,
        rng: &mut impl Rng,
        depth: usize,
        vs: &mut Vec<String>,
        sets: &mut Vec<String>,
        labels: &[Prop],
    ) -> Mso {
        let pick = |rng: &mut dyn rand::RngCore, v: &[String]| v[rng.gen_range(0..v.len())].clone();
        let atom = |rng: &mut dyn rand::RngCore, vs: &[String], sets: &[String]| -> Mso {
            match rng.gen_range(0..5) {
                0 => Mso::Eq(pick(rng, vs), pick(rng, vs)),
                1 | 2 => Mso::Edge(pick(rng, vs), pick(rng, vs)),
                3 if !sets.is_empty() => Mso::In(pick(rng, vs), pick(rng, sets)),
                _ if !labels.is_empty() => Mso::Lab(labels[rng.gen_range(0..labels.len())], pick(rng, vs)),
                _ => Mso::True,
            }
        };
        if depth == 0 {
            return atom(rng, vs, sets);
        }
        let d = depth - 1;
        let choice = rng.gen_range(0..8);
        if choice < 2 && self.set_budget > 0 {
            self.set_budget -= 1;
            let name = format!("X{}", self.next);
            self.next += 1;
            sets.push(name.clone());
            let body = self.gen(rng, d, vs, sets, labels);
            sets.pop();
            return if choice == 0 { Mso::exists(&name, body) } else { Mso::forall(&name, body) };
        }
        if choice < 4 && self.vertex_budget > 0 {
            self.vertex_budget -= 1;
            let name = format!("y{}", self.next);
            self.next += 1;
            vs.push(name.clone());
            let body = self.gen(rng, d, vs, sets, labels);
            vs.pop();
            return if choice == 2 { Mso::exists(&name, body) } else { Mso::forall(&name, body) };
        }
        match rng.gen_range(0..5) {
            0 => atom(rng, vs, sets),
            1 => Mso::not(self.gen(rng, d, vs, sets, labels)),
            2 => Mso::and(self.gen(rng, d, vs, sets, labels), self.gen(rng, d, vs, sets, labels)),
            3 => Mso::or(self.gen(rng, d, vs, sets, labels), self.gen(rng, d, vs, sets, labels)),
            _ => Mso::Implies(
                Box::new(self.gen(rng, d, vs, sets, labels)),
                Box::new(self.gen(rng, d, vs, sets, labels)),
            ),
        }
    }
}
