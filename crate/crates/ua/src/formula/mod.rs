//! First-order formulas over a signature: syntax, classification,
//! evaluation over finite algebras and implicit operations.

mod ast;
mod classify;
mod eval;
mod implicit;
mod parse;

pub use ast::{Formula, ImplicitDef};
pub use classify::{classify, classify_with_note, pp_disjuncts, Classification, FormulaClass, PpForm, DISJUNCT_CAP};
pub use eval::eval_formula;
pub(crate) use eval::PpSystem;
pub use implicit::{
    check_extendable, check_functional, compose_tables, implicit_relation, implicit_table, Extendable,
    FunctionalProof, NonExtendable, NonFunctional, PartialFunctionTable,
};
pub use parse::{parse, parse_term};
