//! Interpretations: sort domains and implementations of every symbol.

mod builtins;
mod domain;
mod interpretation;
mod network;
mod value;

pub use builtins::{Builtin, Stochastic};
pub use domain::{Density, Domain, DomainFamily, Measure, MAX_INT_RANGE};
pub use interpretation::{load_interpretation, FuncImpl, Interpretation, MFuncImpl, Outcome};
pub use network::{Network, NetworkVar};
pub use value::Value;
