//! An engine for a dynamic epistemic logic of group knowledge of
//! hypothetical values.
//!
//! * [`lang`]: terms, formulas, events and their abbreviations.
//! * [`syntax`]: parser and printer for expressions, model files and scenarios.
//! * [`model`]: finite epistemic data models.
//! * [`checker`]: truth and term values at states, and event updates.
//! * [`reducer`]: rewriting dynamic expressions into static ones.
//! * [`decide`]: satisfiability and validity of formulas.
//! * [`gen`]: random and exhaustive generation of models and expressions.
//! * [`scenario`]: scripted sequences of updates and assertions.

pub mod lang;
pub mod model;
pub mod checker;
pub mod syntax;
pub mod reducer;
pub mod decide;
pub mod gen;
pub mod scenario;
