//! A dynamic-semantics engine with a discourse center.
//!
//! Utterances of a small, index-annotated English fragment are composed
//! into linearized DRT boxes. Index 0 of the context holds the discourse
//! center; shifting the center changes what re-evaluated antecedents
//! denote, which yields sloppy readings of VP ellipsis and paycheck
//! pronouns. A finite-model evaluator checks the resulting programs.

pub mod discourse;
pub mod drt;
pub mod fragment;
pub mod golden;
pub mod modeleval;
pub mod trace;
pub mod typelogic;

pub use drt::{BoxProgram, Condition, Drs, Register, RegisterKind};
pub use typelogic::{Term, Type};
