//! A workbench for comparing the expressive power of logics.
//!
//! Logics are given executable semantics (finite matrices, Kripke frame
//! classes, bivaluations, relatedness models, finite first-order
//! structures or an explicit consequence relation). Translations are
//! recursive clause systems. The [`verify`] module checks translation
//! properties by bounded or exhaustive model enumeration and assembles a
//! preorder of logics from the edges that pass.

pub mod catalog;
pub mod formula;
pub mod semantics;
pub mod suite;
pub mod translation;
pub mod verify;

pub use formula::{Formula, FormulaSet, Signature, Template};
pub use semantics::{LogicSpec, Model, ModelMap};
pub use translation::ClauseSystem;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] formula::ParseError),
    #[error("template takes {expected} arguments, got {found}")]
    TemplateArity { expected: usize, found: usize },
    #[error("`{0}` is outside the model's formula domain")]
    OutsideDomain(String),
    #[error("atom `{0}` has no value in the model")]
    UnassignedAtom(String),
    #[error("variable `{0}` is unassigned")]
    UnassignedVariable(String),
    #[error("`{symbol}` cannot be evaluated in {engine} models")]
    Unsupported { engine: String, symbol: String },
    #[error("logic `{0}` has no executable semantics")]
    Uninterpreted(String),
    #[error("model map `{map}` guard violated by `{formula}`")]
    GuardViolated { map: String, formula: String },
    #[error("model map `{map}` does not apply to this model: {reason}")]
    MapInput { map: String, reason: String },
    #[error("translation `{translation}` has no clause for `{connective}`")]
    UncoveredConnective { translation: String, connective: String },
    #[error("cannot compose `{first}` with `{second}`: {reason}")]
    Composition { first: String, second: String, reason: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
