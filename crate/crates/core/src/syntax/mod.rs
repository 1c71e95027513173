//! Concrete grammar, abstract syntax and sort checking.

mod ast;
mod lexer;
mod parser;
mod signature;

pub use ast::{free_vars, Context, Formula, Name, Number, Term, INT_SORT, REAL_SORT};
pub use parser::{parse_formula, parse_formula_in};
pub use signature::{parse_signature, FuncDecl, PredDecl, PredicateRef, Signature, COMPARISONS};
