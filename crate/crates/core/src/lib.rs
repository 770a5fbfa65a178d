//! Branching-time (CTL, CTL*) and alternating-time (ATL, ATL*) temporal
//! logics: parsing, explicit-state model checking, and the polynomial
//! embedding of each logic into its single-variable fragment, together
//! with bounded satisfiability search used to exercise it.

pub mod cgs;
pub mod embedding;
pub mod gen;
pub mod kripke;
pub mod satsearch;
mod stateset;
pub mod syntax;
pub mod verify;

pub use stateset::StateSet;
pub use syntax::{AgentSet, Coalition, Formula, LogicId, Sort, SyntaxError};
