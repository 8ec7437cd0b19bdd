//! Executable corpus: named formulas and reduction generators.

mod circuit;
mod formulas;
mod grid;
mod named;
mod qbf;

pub use circuit::{
    circuit_constraint, circuit_formula, circuit_formula_universal, circuit_to_mc, Circuit, CircuitError, Gate,
};
pub use formulas::*;
pub use grid::build_grid;
pub use named::{formula_or_named, named_formula, CorpusError, NAMES};
pub use qbf::{qbf_formula, qbf_to_mc, Literal, QbfError, QbfInstance};
