//! Computation monads: unit, bind and realisation, plus the splittable key
//! that makes sampling deterministic.

mod computation;
mod key;
mod realize;

pub use computation::{
    bind, set_broken_dist_bind, unit, Computation, Distribution, MonadKind, NonEmpty, Sampler,
    MASS_TOLERANCE, PROB_FLOOR,
};
pub use key::RandomKey;
pub use realize::{count_true, realize, Estimate, Report};
