//! Monadic Tarskian semantics for first-order logic with computational
//! symbols.
//!
//! A [`semantics::Framework`] pairs a computation monad with an aggregated
//! truth algebra. Formulas are parsed against a [`syntax::Signature`], given
//! meaning by a [`model::Interpretation`] and evaluated by one inductive
//! evaluator for every framework.

pub mod algebra;
pub mod effects;
pub mod error;
pub mod model;
pub mod selftest;
pub mod semantics;
pub mod syntax;
pub mod transforms;

pub use error::{Error, Result};
