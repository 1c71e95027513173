//! Aggregated truth algebras: connective tables and quantifier aggregators.

mod aggregate;
mod lift;
mod stl;
mod table;
mod value;

pub use aggregate::{Quantifier, WeightedFamily, LN_FLOOR};
pub use lift::{bernoulli, computation_to_truth, lift_algebra, truth_to_computation};
pub use stl::{and_r, or_r};
pub use table::{make_algebra, parse_algebra, AlgebraKind, Connective, TruthAlgebra};
pub use value::{Carrier, Lp3, TruthValue};
