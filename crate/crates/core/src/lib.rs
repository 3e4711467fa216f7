//! Defeasible logic, argumentation frameworks, stable normative
//! explanations and neighbourhood deontic models built from rule theories.

pub mod argumentation;
pub mod engine;
pub mod explanation;
pub mod gen;
pub mod io;
pub mod model;
pub mod semantics;

pub use engine::{compute_extension, DExtensionSet, DefeatMode, Extension};
pub use model::{ArgumentationTheory, DefeasibleTheory, Literal, Rule, RuleKind, Violation};
