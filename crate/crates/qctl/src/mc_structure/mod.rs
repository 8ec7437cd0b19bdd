//! Model checking under the structure semantics: a fixpoint engine with
//! joint enumeration of quantifier blocks, a brute-force reference
//! evaluator, and a brute-force MSO evaluator.

mod brute;
mod engine;
mod mso_eval;
mod stateset;

pub use brute::{brute_force_sat, BruteError, BRUTE_MAX_DEPTH, BRUTE_MAX_STATES};
pub use engine::{check, labelling_from_names, sat_set, CheckOptions, HintMode, Labelling, McError};
pub use mso_eval::{eval_mso, MsoEvalError, MsoValue, MSO_MAX_SET_VARS, MSO_MAX_STATES};
pub use stateset::StateSet;
