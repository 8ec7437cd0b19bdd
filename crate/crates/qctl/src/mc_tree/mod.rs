//! Model checking under the tree semantics: formulas are compiled into
//! alternating tree automata, and the unwinding of the structure is tested
//! for membership by solving a parity game.

use std::collections::BTreeSet;
use std::rc::Rc;

use log::debug;

use crate::automata::{
    accepts, ctl_with_plugs, dual, membership_game, project, simulate, Alphabet, Apta, AutomatonError, Letter,
    Limits, MembershipGame, MAX_PROPS,
};
use crate::games::{solve, Player};
use crate::kripke::{Kripke, StateId};
use crate::logic::{negation_normal_form, Formula, NotQctl, Prop};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error(transparent)]
    NotQctl(#[from] NotQctl),
    #[error("at quantifier nesting level {level}: {source}")]
    Automaton { level: usize, source: AutomatonError },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("formula and structure use {0} propositions; at most {MAX_PROPS} are supported")]
    AlphabetTooLarge(usize),
}

impl TreeError {
    pub fn is_blowup(&self) -> bool {
        matches!(
            self,
            TreeError::Automaton {
                source: AutomatonError::Blowup { .. },
                ..
            }
        )
    }
}

/// The propositions an automaton for `f` needs to read: every proposition
/// of the formula, free or bound.
pub fn alphabet_for(f: &Formula) -> Result<Alphabet, TreeError> {
    let props = f.all_props();
    let n = props.len();
    Alphabet::try_new(props).ok_or(TreeError::AlphabetTooLarge(n))
}

/// An automaton accepting exactly the trees, with branching degrees in
/// `degrees`, that satisfy `f` at their root.
///
/// Quantified subformulas are compiled recursively: the body's automaton
/// is made nondeterministic, projected on the quantified propositions and
/// plugged into the automaton of the surrounding CTL context. Universal and
/// negated quantifiers go through the dual automaton.
pub fn compile(f: &Formula, degrees: &[usize], alphabet: &Alphabet, limits: &Limits) -> Result<Apta, TreeError> {
    let nnf = negation_normal_form(f)?;
    compile_nnf(&nnf, degrees, alphabet, limits, 0)
}

fn compile_nnf(f: &Formula, degrees: &[usize], ab: &Alphabet, limits: &Limits, level: usize) -> Result<Apta, TreeError> {
    let mut inner_err = None;
    let mut plug = |g: &Formula| -> Result<Apta, AutomatonError> {
        quantified(g, degrees, ab, limits, level + 1).map_err(|e| {
            let wrapped = match &e {
                TreeError::Automaton { source, .. } => source.clone(),
                other => AutomatonError::NotCtl(other.to_string()),
            };
            inner_err = Some(e);
            wrapped
        })
    };
    let result = ctl_with_plugs(f, ab.clone(), degrees, &mut plug);
    match (result, inner_err) {
        (Ok(a), _) => Ok(a),
        (Err(_), Some(e)) => Err(e),
        (Err(source), None) => Err(TreeError::Automaton { level, source }),
    }
}

/// Automaton for a quantifier node, possibly under one negation.
fn quantified(g: &Formula, degrees: &[usize], ab: &Alphabet, limits: &Limits, level: usize) -> Result<Apta, TreeError> {
    let (negated, node) = match g {
        Formula::Not(inner) => (true, &**inner),
        other => (false, other),
    };
    let (universal, props, body) = match node {
        Formula::Exists(ps, b) => (false, ps, &**b),
        Formula::Forall(ps, b) => (true, ps, &**b),
        _ => unreachable!("plugs are quantifier nodes"),
    };
    // ∀P.φ = ¬∃P.¬φ, so both ∀ and ¬∃ end with a dual, and exactly one of
    // ∀ and ¬ negates the body.
    let body = if universal {
        negation_normal_form(&Formula::not(body.clone()))?
    } else {
        body.clone()
    };
    let inner = compile_nnf(&body, degrees, ab, limits, level)?;
    let at = |source| TreeError::Automaton { level, source };
    let nondet = simulate(&inner, limits).map_err(at)?;
    let hidden: BTreeSet<Prop> = props.iter().copied().collect();
    let exists = project(&nondet, &hidden).as_apta();
    debug!("level {level}: compiled {g} ({} inner states)", inner.discovered());
    Ok(if universal != negated { dual(&exists) } else { exists })
}

/// Options of a tree-semantics check.
#[derive(Clone, Copy, Debug, Default)]
pub struct TreeOptions {
    pub limits: Limits,
}

/// Result of a tree-semantics check with the artifacts that produced it.
pub struct TreeReport {
    pub holds: bool,
    pub automaton: Apta,
    pub membership: MembershipGame,
}

impl TreeReport {
    /// Automaton states discovered while building the game.
    pub fn automaton_states(&self) -> usize {
        self.automaton.discovered()
    }

    pub fn game_positions(&self) -> usize {
        self.membership.game.len()
    }

    /// DOT rendering of the automaton, restricted to the letters the
    /// structure can show.
    pub fn automaton_dot(&self, s: &Kripke, max_states: usize) -> Result<String, AutomatonError> {
        let mut letters: Vec<Letter> = s.states().map(|q| self.automaton.alphabet().letter(s.labels(q))).collect();
        letters.sort_unstable();
        letters.dedup();
        Ok(self.automaton.materialize_on(&letters, max_states)?.to_dot())
    }

    pub fn game_dot(&self) -> String {
        self.membership.game.to_dot()
    }
}

/// Does `f` hold at `q` under the tree semantics?
pub fn check_tree(s: &Kripke, q: StateId, f: &Formula) -> Result<bool, TreeError> {
    check_tree_with(s, q, f, &TreeOptions::default()).map(|r| r.holds)
}

pub fn check_tree_with(s: &Kripke, q: StateId, f: &Formula, opts: &TreeOptions) -> Result<TreeReport, TreeError> {
    if q >= s.len() {
        return Err(TreeError::UnknownState(q.to_string()));
    }
    let ab = alphabet_for(f)?;
    let degrees = s.degrees_from(q);
    let automaton = compile(f, &degrees, &ab, &opts.limits)?;
    let at = |source| TreeError::Automaton { level: 0, source };
    let membership = membership_game(&automaton, s, q, &opts.limits).map_err(at)?;
    let holds = solve(&membership.game).winner[membership.start] == Player::Even;
    Ok(TreeReport {
        holds,
        automaton,
        membership,
    })
}

/// Membership of the unwinding of `s` from `q` in an already compiled
/// automaton.
pub fn unwinding_accepted(a: &Apta, s: &Kripke, q: StateId, limits: &Limits) -> Result<bool, TreeError> {
    accepts(a, s, q, limits).map_err(|source| TreeError::Automaton { level: 0, source })
}

/// Shares one compiled automaton across many checks of the same formula.
pub struct TreeChecker {
    formula: Formula,
    alphabet: Alphabet,
    limits: Limits,
    cache: Vec<(Vec<usize>, Rc<Apta>)>,
}

impl TreeChecker {
    pub fn new(f: &Formula, limits: Limits) -> Result<TreeChecker, TreeError> {
        Ok(TreeChecker {
            formula: negation_normal_form(f)?,
            alphabet: alphabet_for(f)?,
            limits,
            cache: Vec::new(),
        })
    }

    pub fn check(&mut self, s: &Kripke, q: StateId) -> Result<bool, TreeError> {
        let degrees = s.degrees_from(q);
        let a = match self.cache.iter().find(|(d, _)| *d == degrees) {
            Some((_, a)) => a.clone(),
            None => {
                let a = Rc::new(compile_nnf(&self.formula, &degrees, &self.alphabet, &self.limits, 0)?);
                self.cache.push((degrees, a.clone()));
                a
            }
        };
        unwinding_accepted(&a, s, q, &self.limits)
    }
}
