use thiserror::Error;

/// Errors raised anywhere in the engine.
///
/// The variant name leads every message so command-line diagnostics can be
/// matched on the error kind.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // syntax
    #[error("SyntaxError: {0}")]
    Syntax(String),
    #[error("DuplicateSymbol: {0}")]
    DuplicateSymbol(String),
    #[error("UnknownSort: {0}")]
    UnknownSort(String),
    #[error("UnknownSymbol: {0}")]
    UnknownSymbol(String),
    #[error("ArityMismatch: {symbol} expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("SortMismatch: {0}")]
    SortMismatch(String),
    #[error("ShadowedVariable: {0}")]
    ShadowedVariable(String),

    // algebra
    #[error("UnknownAlgebra: {0}")]
    UnknownAlgebra(String),
    #[error("ParamOutOfRange: {0}")]
    ParamOutOfRange(String),
    #[error("CarrierMismatch: {0}")]
    CarrierMismatch(String),
    #[error("EmptyFamily: quantifier family has no element of positive weight")]
    EmptyFamily,
    #[error("ExactOnly: {0}")]
    ExactOnly(String),
    #[error("NegativeWeight: {0}")]
    NegativeWeight(f64),

    // effects
    #[error("UnknownMonad: {0}")]
    UnknownMonad(String),
    #[error("KindMismatch: {0}")]
    KindMismatch(String),
    #[error("BudgetMissing: {0}")]
    BudgetMissing(String),
    #[error("InvalidDistribution: {0}")]
    InvalidDistribution(String),
    #[error("Nondeterministic: {0}")]
    Nondeterministic(String),

    // model
    #[error("SchemaError: {0}")]
    Schema(String),
    #[error("MissingSymbol: {0}")]
    MissingSymbol(String),
    #[error("FiniteOnly: {0}")]
    FiniteOnly(String),
    #[error("EmptyDomain: {0}")]
    EmptyDomain(String),
    #[error("MissingTableRow: {0}")]
    MissingTableRow(String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("TypeError: {0}")]
    Type(String),

    // semantics
    #[error("IncompatibleFramework: {0}")]
    IncompatibleFramework(String),
    #[error("OpenFormula: free variables {0:?}")]
    OpenFormula(Vec<String>),
    #[error("UnboundVariable: {0}")]
    UnboundVariable(String),

    // transforms
    #[error("ContinuousUnsupported: {0}")]
    ContinuousUnsupported(String),
    #[error("CyclicParents: {0}")]
    CyclicParents(String),
    #[error("UnknownVariable: {0}")]
    UnknownVariable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
