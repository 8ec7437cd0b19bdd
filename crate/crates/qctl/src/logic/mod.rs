//! Formulas of CTL* with propositional quantification: syntax tree, parser,
//! printer, measurements, fragment classification and normal forms.

mod classify;
mod formula;
mod fresh;
mod measure;
mod nnf;
mod parse;
mod print;
mod prop;
mod subst;

pub use classify::{
    block_depth, classify, is_prenex, prefix_class, quantifier_depth, BodyKind, FragmentDescriptor, OverallClass,
    PrefixClass,
};
pub use formula::{Formula, PathFormula, Quant, Temporal};
pub use fresh::FreshNames;
pub use measure::{dag_size, size, size_and_dag_size};
pub use nnf::{is_nnf, negation_normal_form, NotQctl};
pub(crate) use parse::error as syntax_error;
pub use parse::{parse_formula, parse_formula_with_warnings, rename_duplicate_binders, ParseError, ParseWarning};
pub use prop::Prop;
pub use subst::{alpha_equivalent, rename_free, substitute, SubstError};
