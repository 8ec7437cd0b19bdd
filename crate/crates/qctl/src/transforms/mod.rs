//! Formula-to-formula translations.

mod fixpoint;
mod hat;
mod mso;
mod prenex;

pub use fixpoint::{lfp_encode, LfpError};
pub use hat::{hat_transform, HatError};
pub use mso::{is_set_var, mso_to_qctl, parse_mso, Mso, MsoError, MsoSemantics, ROOT_VAR};
pub use prenex::{flatten_until, prenex};
