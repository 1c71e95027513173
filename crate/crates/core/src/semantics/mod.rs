//! The inductive Tarskian evaluator, parameterised by a framework.

mod eval;
mod framework;
mod report;

pub use eval::{eval_formula, eval_term, Budget, Evaluator, Valuation, DEFAULT_INNER_SAMPLES};
pub use framework::{default_algebra, Framework, COMPATIBILITY};
pub use report::{evaluate_sentence, EvalReport, ReportValue};
