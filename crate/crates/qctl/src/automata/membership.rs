use std::collections::HashMap;

use super::core::blowup;
use super::{AState, Apta, AutomatonError, Limits, Pbf};
use crate::games::{solve, ParityGame, Player};
use crate::kripke::{Kripke, StateId};

/// The acceptance game of an automaton on the unwinding of a structure.
pub struct MembershipGame {
    pub game: ParityGame,
    /// Position of the pair (root state, initial automaton state).
    pub start: usize,
    /// (structure state, automaton state) of every state position.
    pub pairs: Vec<(usize, StateId, AState)>,
}

/// Builds the game whose positions are pairs (structure state, automaton
/// state) plus one position per inner node of a transition formula: Even
/// owns disjunctions, Odd owns conjunctions, and an atom `(c, q')` moves to
/// `(c-th successor, q')`. Inner nodes get the largest priority in the game,
/// which never decides a play because every cycle meets a pair position.
pub fn membership_game(a: &Apta, s: &Kripke, root: StateId, limits: &Limits) -> Result<MembershipGame, AutomatonError> {
    let mut b = GameBuilder {
        a,
        s,
        game: ParityGame::new(),
        ids: HashMap::new(),
        pairs: Vec::new(),
        inner: Vec::new(),
        queue: Vec::new(),
        sinks: None,
        cap: limits.max_positions,
    };
    let start = b.pair(root, a.initial())?;
    while let Some((v, st, q)) = b.queue.pop() {
        let d = s.degree(st);
        let letter = a.alphabet().letter(s.labels(st));
        let f = a.transition(q, letter, d)?;
        let w = b.formula(st, &f)?;
        b.game.add_edge(v, w);
    }
    let top = b.pairs.iter().map(|&(v, _, _)| b.game.priority(v)).max().unwrap_or(0).max(1);
    for &v in &b.inner {
        b.game.set_priority(v, top);
    }
    Ok(MembershipGame {
        game: b.game,
        start,
        pairs: b.pairs,
    })
}

/// Does `a` accept the unwinding of `s` from `root`?
pub fn accepts(a: &Apta, s: &Kripke, root: StateId, limits: &Limits) -> Result<bool, AutomatonError> {
    let mg = membership_game(a, s, root, limits)?;
    Ok(solve(&mg.game).winner[mg.start] == Player::Even)
}

struct GameBuilder<'a> {
    a: &'a Apta,
    s: &'a Kripke,
    game: ParityGame,
    ids: HashMap<(StateId, AState), usize>,
    pairs: Vec<(usize, StateId, AState)>,
    inner: Vec<usize>,
    queue: Vec<(usize, StateId, AState)>,
    sinks: Option<(usize, usize)>,
    cap: usize,
}

impl GameBuilder<'_> {
    fn fresh(&mut self, owner: Player, priority: u32) -> Result<usize, AutomatonError> {
        if self.game.len() >= self.cap {
            return Err(blowup("game positions", self.cap));
        }
        Ok(self.game.add_position(owner, priority))
    }

    fn pair(&mut self, st: StateId, q: AState) -> Result<usize, AutomatonError> {
        if let Some(&v) = self.ids.get(&(st, q)) {
            return Ok(v);
        }
        let v = self.fresh(Player::Even, self.a.priority(q))?;
        self.ids.insert((st, q), v);
        self.pairs.push((v, st, q));
        self.queue.push((v, st, q));
        Ok(v)
    }

    fn sinks(&mut self) -> Result<(usize, usize), AutomatonError> {
        if let Some(s) = self.sinks {
            return Ok(s);
        }
        let win = self.fresh(Player::Even, 0)?;
        self.game.add_edge(win, win);
        let lose = self.fresh(Player::Even, 1)?;
        self.game.add_edge(lose, lose);
        self.sinks = Some((win, lose));
        Ok((win, lose))
    }

    fn formula(&mut self, st: StateId, f: &Pbf) -> Result<usize, AutomatonError> {
        Ok(match f {
            Pbf::True => self.sinks()?.0,
            Pbf::False => self.sinks()?.1,
            Pbf::Atom(c, q) => {
                let t = self.s.succ_at(st, *c).ok_or(AutomatonError::Degree(*c + 1))?;
                self.pair(t, *q)?
            }
            Pbf::And(xs) | Pbf::Or(xs) => {
                let owner = if matches!(f, Pbf::And(_)) { Player::Odd } else { Player::Even };
                let v = self.fresh(owner, 0)?;
                self.inner.push(v);
                for x in xs {
                    let w = self.formula(st, x)?;
                    self.game.add_edge(v, w);
                }
                v
            }
        })
    }
}
