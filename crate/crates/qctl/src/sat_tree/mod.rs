//! Satisfiability under the tree semantics.
//!
//! A formula is satisfiable iff it holds at the root of some regular tree of
//! branching degree 1 or 2 where extra `p_int` nodes encode wider branching.
//! The formula is rewritten for such trees, compiled into an automaton and
//! checked for emptiness by a parity game; a winning strategy yields a
//! finite witness structure.

mod witness;

use std::collections::HashMap;
use std::time::Instant;

use log::debug;

use crate::automata::{simulate, AState, AutomatonError, Letter, Limits, Npta};
use crate::games::{solve, ParityGame, Player};
use crate::kripke::{Kripke, StateId, P_INT};
use crate::logic::{Formula, Prop};
use crate::mc_tree::{alphabet_for, check_tree_with, compile, TreeError, TreeOptions};
use crate::transforms::{hat_transform, HatError};

use witness::TreeGraph;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Hat(#[from] HatError),
    #[error("satisfiability under the structure semantics is undecidable")]
    Undecidable,
    #[error("witness failed verification: the formula does not hold on it")]
    Unverified,
}

impl SatError {
    pub fn is_blowup(&self) -> bool {
        matches!(self, SatError::Tree(e) if e.is_blowup())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SatOptions {
    pub limits: Limits,
    /// Re-check every witness with the tree model checker.
    pub verify: bool,
}

impl Default for SatOptions {
    fn default() -> Self {
        SatOptions {
            limits: Limits::default(),
            verify: true,
        }
    }
}

/// A finite structure whose unwinding from `root` satisfies the formula.
#[derive(Clone, Debug)]
pub struct Witness {
    pub structure: Kripke,
    pub root: StateId,
    /// The witness before `p_int` nodes were bypassed: a structure of
    /// degrees 1 and 2.
    pub encoded: Kripke,
}

#[derive(Clone, Debug)]
pub enum SatResult {
    Unsat,
    Sat(Box<Witness>),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SatStats {
    pub automaton_states: usize,
    pub game_positions: usize,
    pub millis: u128,
}

/// Satisfiability under the structure semantics, which has no decision
/// procedure.
pub fn sat_structure(_f: &Formula) -> Result<SatResult, SatError> {
    Err(SatError::Undecidable)
}

pub fn sat(f: &Formula) -> Result<SatResult, SatError> {
    sat_with(f, &SatOptions::default()).map(|(r, _)| r)
}

/// Strips the outermost existential block, which does not change
/// satisfiability.
pub fn strip_outer_exists(f: &Formula) -> &Formula {
    let mut g = f;
    while let Formula::Exists(_, body) = g {
        g = body;
    }
    g
}

pub fn sat_with(f: &Formula, opts: &SatOptions) -> Result<(SatResult, SatStats), SatError> {
    let start = Instant::now();
    let core = strip_outer_exists(f);
    let p_int = Formula::prop(P_INT);
    let encoded = Formula::conj([
        hat_transform(core)?,
        Formula::not(p_int.clone()),
        Formula::ag(Formula::af(Formula::not(p_int))),
    ]);
    let ab = alphabet_for(&encoded)?;
    let at = |source| TreeError::Automaton { level: 0, source };
    let apta = compile(&encoded, &[1, 2], &ab, &opts.limits)?;
    let npta = simulate(&apta, &opts.limits).map_err(at)?;
    // bound propositions are projected away, so their bits never matter
    let free = ab.mask(encoded.free_props());
    let (outcome, positions) = emptiness_with(&npta, free, &opts.limits).map_err(at)?;
    let mut stats = SatStats {
        automaton_states: npta.discovered(),
        game_positions: positions,
        millis: 0,
    };
    debug!("emptiness game: {positions} positions, {} automaton states", stats.automaton_states);
    let Some(tree) = outcome else {
        stats.millis = start.elapsed().as_millis();
        return Ok((SatResult::Unsat, stats));
    };
    let (encoded_structure, _) = tree.realize(|v| format!("e{v}"));
    let mut collapsed = tree
        .collapse(Prop::new(P_INT))
        .expect("accepted trees leave p_int nodes on every branch");
    collapsed.restrict_labels(&core.free_props());
    let (structure, root) = collapsed.quotient().realize(|v| format!("w{v}"));
    if opts.verify {
        let report = check_tree_with(&structure, root, f, &TreeOptions { limits: opts.limits })?;
        if !report.holds {
            return Err(SatError::Unverified);
        }
    }
    stats.millis = start.elapsed().as_millis();
    Ok((
        SatResult::Sat(Box::new(Witness {
            structure,
            root,
            encoded: encoded_structure,
        })),
        stats,
    ))
}

/// Emptiness of a nondeterministic automaton. Returns a finite structure
/// whose unwinding is accepted, if any.
pub fn emptiness(n: &Npta, limits: &Limits) -> Result<Option<(Kripke, StateId)>, AutomatonError> {
    let all = n.alphabet().mask(n.alphabet().props().iter().copied());
    let (t, _) = emptiness_with(n, all, limits)?;
    Ok(t.map(|t| t.realize(|v| format!("n{v}"))))
}

/// Builds the emptiness game: Even, at an automaton state, picks a letter
/// over `letters_mask`, a degree and one tuple of the transition; Odd then
/// picks a direction. Tuple positions carry the largest priority. A winning
/// strategy of Even, read from the initial state, is the witness tree.
///
/// The game is explored in rounds. After each round the partial game, where
/// unexplored positions lose for Even, is solved; a win there is a win in
/// the full game, so exploration stops early on satisfiable inputs.
fn emptiness_with(n: &Npta, letters_mask: Letter, limits: &Limits) -> Result<(Option<TreeGraph>, usize), AutomatonError> {
    let mut b = EmptinessGame {
        n,
        letters: n.alphabet().letters_within(letters_mask),
        game: ParityGame::new(),
        state_pos: HashMap::new(),
        tuple_pos: HashMap::new(),
        tuples: Vec::new(),
        queue: Default::default(),
        cap: limits.max_positions,
    };
    let start = b.state(n.initial())?;
    let mut next_solve = 1024;
    loop {
        let done = match b.queue.pop_front() {
            Some(q) => {
                b.expand(q)?;
                false
            }
            None => true,
        };
        if !done && b.game.len() < next_solve {
            continue;
        }
        next_solve = b.game.len() * 2;
        let (g, pending) = b.closed();
        let sol = solve(&g);
        if sol.winner[start] == Player::Even {
            debug!("emptiness: Even wins after exploring {} positions ({pending} pending)", g.len());
            return Ok((Some(b.strategy_graph(&sol.strategy)), g.len()));
        }
        if done {
            return Ok((None, g.len()));
        }
    }
}

struct EmptinessGame<'a> {
    n: &'a Npta,
    letters: Vec<Letter>,
    game: ParityGame,
    state_pos: HashMap<AState, usize>,
    tuple_pos: HashMap<(Letter, Vec<AState>), usize>,
    tuples: Vec<(usize, Letter, Vec<AState>)>,
    queue: std::collections::VecDeque<AState>,
    cap: usize,
}

impl EmptinessGame<'_> {
    fn fresh(&mut self, owner: Player, priority: u32) -> Result<usize, AutomatonError> {
        if self.game.len() >= self.cap {
            return Err(AutomatonError::Blowup {
                what: "emptiness game positions".into(),
                cap: self.cap,
            });
        }
        Ok(self.game.add_position(owner, priority))
    }

    fn state(&mut self, q: AState) -> Result<usize, AutomatonError> {
        if let Some(&v) = self.state_pos.get(&q) {
            return Ok(v);
        }
        let v = self.fresh(Player::Even, self.n.priority(q))?;
        self.state_pos.insert(q, v);
        self.queue.push_back(q);
        Ok(v)
    }

    fn expand(&mut self, q: AState) -> Result<(), AutomatonError> {
        let v = self.state_pos[&q];
        for &d in self.n.degrees() {
            for i in 0..self.letters.len() {
                let letter = self.letters[i];
                for t in self.n.choices(q, letter, d)?.iter() {
                    let key = (letter, t.clone());
                    let w = match self.tuple_pos.get(&key) {
                        Some(&w) => w,
                        None => {
                            let w = self.fresh(Player::Odd, 0)?;
                            self.tuple_pos.insert(key, w);
                            self.tuples.push((w, letter, t.clone()));
                            for &r in t {
                                let u = self.state(r)?;
                                self.game.add_edge(w, u);
                            }
                            w
                        }
                    };
                    self.game.add_edge(v, w);
                }
            }
        }
        Ok(())
    }

    /// The explored game made total: dead ends and unexplored positions
    /// move to a sink that Even loses. Tuple positions get the largest
    /// priority. Also returns the number of unexplored positions.
    fn closed(&self) -> (ParityGame, usize) {
        let mut g = self.game.clone();
        let top = self.state_pos.values().map(|&v| g.priority(v)).max().unwrap_or(0).max(1);
        for &(w, _, _) in &self.tuples {
            g.set_priority(w, top);
        }
        let sink = g.add_position(Player::Even, 1);
        g.add_edge(sink, sink);
        let mut pending = 0;
        for &v in self.state_pos.values() {
            if g.succ(v).is_empty() {
                g.add_edge(v, sink);
                pending += 1;
            }
        }
        (g, pending)
    }

    /// Even's strategy read as a graph over automaton states.
    fn strategy_graph(&self, strategy: &[Option<usize>]) -> TreeGraph {
        let by_pos: HashMap<usize, (Letter, &Vec<AState>)> =
            self.tuples.iter().map(|(w, l, t)| (*w, (*l, t))).collect();
        let root = self.n.initial();
        let mut ids: HashMap<AState, usize> = HashMap::from([(root, 0)]);
        let mut order = vec![root];
        let mut labels = Vec::new();
        let mut succ = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            let choice = strategy[self.state_pos[&q]].expect("Even moves at its winning positions");
            let (letter, tuple) = by_pos[&choice];
            labels.push(self.n.alphabet().props_of(letter));
            let mut out = Vec::new();
            for &r in tuple {
                let next = ids.len();
                let id = *ids.entry(r).or_insert_with(|| {
                    order.push(r);
                    next
                });
                out.push(id);
            }
            succ.push(out);
            i += 1;
        }
        TreeGraph { labels, succ, root: 0 }
    }
}

#[cfg(test)]
mod tests;
