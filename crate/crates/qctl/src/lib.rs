//! Model checking and satisfiability for CTL with propositional
//! quantification, under the structure semantics and the tree semantics.

pub mod logic;
pub mod kripke;
pub mod mc_structure;
pub mod corpus;
pub mod transforms;
pub mod automata;
pub mod games;
pub mod mc_tree;
pub mod sat_tree;
pub mod random;

mod util;
