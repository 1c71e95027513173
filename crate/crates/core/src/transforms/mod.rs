//! Framework transformations and weighted model counting.

mod argmax;
mod wmc;

pub use argmax::{argmax_interpretation, argmax_with_tolerance, TIE_TOLERANCE};
pub use wmc::{wmc, wmc_bruteforce, wmc_build};
