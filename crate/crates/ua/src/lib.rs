//! Finite universal algebra workbench: formulas and implicit operations over
//! finite algebras, congruences, dominions, term conditions and pp expansions.

pub mod algebra;
pub mod budget;
pub mod classops;
pub mod cli;
pub mod closure;
pub mod congruence;
pub mod dominion;
pub mod error;
pub mod expansion;
pub mod formula;
pub mod gallery;
#[cfg(test)]
pub(crate) mod oracle;
pub mod repro;
pub mod termcond;

pub use budget::{SearchBudget, Verdict};
pub use error::{Error, Result};
