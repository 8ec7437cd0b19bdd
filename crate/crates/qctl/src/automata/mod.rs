//! Alternating and nondeterministic parity tree automata whose transitions
//! depend on the degree of the current node.
//!
//! Automata are lazy: states are created when a transition first mentions
//! them, so membership and emptiness checks only build what they visit.

mod alphabet;
mod core;
mod ctl;
mod membership;
mod pbf;
mod project;
mod simulate;

pub use self::core::{
    accept_all, choices_of_pbf, combine, dual, pbf_of_choices, reject_all, AcceptanceKind, Apta, AutomatonError,
    BoolOp, Explicit, Limits, NondetAutomaton, Npta, TreeAutomaton,
};
pub use alphabet::{Alphabet, Letter, MAX_PROPS};
pub use ctl::{ctl_to_apta, ctl_with_plugs, UNTIL_PRIORITY, WEAK_PRIORITY};
pub use membership::{accepts, membership_game, MembershipGame};
pub use pbf::{AState, Move, Pbf, TooManyModels};
pub use project::project;
pub use simulate::{simulate, simulate_with, SimulationMethod};

#[cfg(test)]
mod tests;
