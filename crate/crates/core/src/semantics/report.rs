use std::fmt;
use std::sync::Arc;

use crate::algebra::{truth_to_computation, Lp3, TruthValue};
use crate::effects::{realize, MonadKind, RandomKey, Report};
use crate::error::{Error, Result};
use crate::model::Interpretation;
use crate::syntax::Formula;

use super::eval::{Budget, Evaluator, Valuation};
use super::framework::Framework;

/// A realised sentence value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportValue {
    Boolean(bool),
    Lp3(Lp3),
    /// Probability, robustness or Monte Carlo estimate.
    Real(f64),
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Boolean(b) => write!(f, "{b}"),
            ReportValue::Lp3(x) => write!(f, "{x}"),
            ReportValue::Real(x) => write!(f, "{x}"),
        }
    }
}

/// Result of evaluating a sentence. `samples`, `seed` and `stderr` are set
/// exactly when the monad is the sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub value: ReportValue,
    pub monad: MonadKind,
    pub algebra: String,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub stderr: Option<f64>,
}

impl EvalReport {
    pub fn as_f64(&self) -> Option<f64> {
        match self.value {
            ReportValue::Real(x) => Some(x),
            ReportValue::Boolean(b) => Some(f64::from(u8::from(b))),
            ReportValue::Lp3(_) => None,
        }
    }
}

/// Evaluates a closed formula under the empty valuation and realises it.
pub fn evaluate_sentence(
    f: &Formula,
    fw: &Framework,
    interp: &Arc<Interpretation>,
    budget: Budget,
    seed: u64,
) -> Result<EvalReport> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::OpenFormula(free.names()));
    }
    let ev = Evaluator::new(*fw, interp.clone(), budget)?;
    let root = RandomKey::new(seed);
    let v = ev.formula(f, &Valuation::new(), &root.child(0))?;
    report(fw, budget, seed, v, &root.child(1))
}

fn report(fw: &Framework, budget: Budget, seed: u64, v: TruthValue, key: &RandomKey) -> Result<EvalReport> {
    let mut out = EvalReport {
        value: ReportValue::Boolean(false),
        monad: fw.monad(),
        algebra: fw.algebra().name(),
        samples: None,
        seed: None,
        stderr: None,
    };
    if fw.monad() == MonadKind::Sampler {
        let (estimate, stderr, samples) = match v {
            TruthValue::Estimate { value, stderr } => (value, stderr, budget.samples),
            TruthValue::Prob(p) => (p, 0.0, budget.samples),
            other => {
                let c = truth_to_computation(&other, MonadKind::Sampler)?;
                match realize(&c, budget.samples, key)? {
                    Report::Estimate(e) => (e.estimate, e.stderr, Some(e.samples)),
                    r => unreachable!("sampler realised as {r:?}"),
                }
            }
        };
        let samples = samples
            .ok_or_else(|| Error::BudgetMissing("the sampler framework needs a sample count".into()))?;
        out.value = ReportValue::Real(estimate);
        out.samples = Some(samples);
        out.seed = Some(seed);
        out.stderr = Some(stderr);
        return Ok(out);
    }
    out.value = match v {
        TruthValue::B2(b) => ReportValue::Boolean(b),
        TruthValue::Lp3(x) => ReportValue::Lp3(x),
        TruthValue::Prob(x) | TruthValue::XReal(x) => ReportValue::Real(x),
        other => {
            return Err(Error::CarrierMismatch(format!(
                "{} framework produced a {} value",
                fw.monad().cli_name(),
                other.carrier()
            )))
        }
    };
    Ok(out)
}
