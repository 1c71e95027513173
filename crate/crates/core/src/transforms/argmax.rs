use crate::effects::{MonadKind, NonEmpty};
use crate::error::{Error, Result};
use crate::model::{Domain, Interpretation, MFuncImpl, Outcome};

/// Probabilities within this distance of a row maximum count as maximal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Sends a distributional interpretation to a non-deterministic one: every
/// table row becomes the set of its most probable outcomes. Ordinary symbols
/// and domains are unchanged.
pub fn argmax_interpretation(i: &Interpretation) -> Result<Interpretation> {
    argmax_with_tolerance(i, TIE_TOLERANCE)
}

pub fn argmax_with_tolerance(i: &Interpretation, tol: f64) -> Result<Interpretation> {
    if !(tol >= 0.0) {
        return Err(Error::ParamOutOfRange(format!("tie tolerance must be >= 0, got {tol}")));
    }
    if let Some((sort, _)) = i.sorts.iter().find(|(_, d)| matches!(d, Domain::RealInterval { .. })) {
        return Err(Error::ContinuousUnsupported(format!("sort `{sort}` is continuous")));
    }
    let mut out = i.clone();
    out.kind = MonadKind::NonEmptySet;
    for (name, imp) in out.mfuncs.iter_mut().chain(out.mpreds.iter_mut()) {
        let rows = match imp {
            MFuncImpl::CTable(rows) => rows,
            MFuncImpl::Builtin(s) => {
                return Err(Error::ContinuousUnsupported(format!(
                    "`{name}` is the builtin family `{}`, which has no table to maximise",
                    s.name()
                )))
            }
        };
        for outcome in rows.values_mut() {
            if let Outcome::Dist(d) = outcome {
                let best = d.entries().iter().map(|(_, p)| *p).fold(f64::NEG_INFINITY, f64::max);
                let winners: Vec<_> =
                    d.entries().iter().filter(|(_, p)| best - p <= tol).map(|(v, _)| v.clone()).collect();
                *outcome = Outcome::Set(NonEmpty::new(winners).expect("a maximum exists"));
            }
        }
    }
    Ok(out)
}
