//! Lifting the Boolean table along a monad: `a ⊗' b = do x ← a; y ← b; η(x ⊗ y)`.

use crate::effects::{unit, Computation, Distribution, MonadKind, Sampler};
use crate::error::{Error, Result};

use super::table::{AlgebraKind, TruthAlgebra};
use super::value::TruthValue;

/// Lifts a Boolean algebra to `T(Ω)`. Over the identity monad the result is
/// the Boolean algebra itself.
pub fn lift_algebra(base: &TruthAlgebra, kind: MonadKind) -> Result<TruthAlgebra> {
    if base.kind() != AlgebraKind::Boolean {
        return Err(Error::CarrierMismatch(format!(
            "only the boolean table can be lifted, got {}",
            base.name()
        )));
    }
    match kind {
        MonadKind::Identity => Ok(*base),
        other => TruthAlgebra::new(AlgebraKind::Lifted(other)),
    }
}

/// Reads a truth value as a computation over `{0, 1}` of the given kind.
pub fn truth_to_computation(v: &TruthValue, kind: MonadKind) -> Result<Computation<bool>> {
    let mismatch = || {
        Error::CarrierMismatch(format!("cannot read {v} ({}) as a {kind} computation", v.carrier()))
    };
    Ok(match (kind, v) {
        (MonadKind::Identity, TruthValue::B2(b)) => Computation::Pure(*b),
        (MonadKind::NonEmptySet, TruthValue::Lp3(x)) => Computation::Set(x.to_set()),
        (MonadKind::NonEmptySet, TruthValue::B2(b)) => unit(kind, *b),
        (MonadKind::Distribution, TruthValue::Prob(p)) => Computation::Dist(bernoulli(*p)?),
        (MonadKind::Distribution, TruthValue::B2(b)) => unit(kind, *b),
        (MonadKind::Sampler, TruthValue::BoolSampler(s)) => Computation::Sampler(s.clone()),
        (MonadKind::Sampler, TruthValue::B2(b)) => unit(kind, *b),
        (MonadKind::Sampler, TruthValue::Prob(p) | TruthValue::Estimate { value: p, .. }) => {
            Computation::Sampler(Sampler::bernoulli(*p))
        }
        _ => return Err(mismatch()),
    })
}

/// Inverse of [`truth_to_computation`].
pub fn computation_to_truth(c: Computation<bool>) -> TruthValue {
    match c {
        Computation::Pure(b) => TruthValue::B2(b),
        Computation::Set(s) => TruthValue::Lp3(super::Lp3::from_set(&s)),
        Computation::Dist(d) => TruthValue::Prob(d.prob(&true)),
        Computation::Sampler(s) => TruthValue::BoolSampler(s),
    }
}

/// The two-point distribution with `P(true) = p`.
pub fn bernoulli(p: f64) -> Result<Distribution<bool>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange(format!("probability {p} is not in [0, 1]")));
    }
    Distribution::new(vec![(false, 1.0 - p), (true, p)])
}

pub(crate) fn lifted_unary(kind: MonadKind, x: &TruthValue, op: fn(bool) -> bool) -> Result<TruthValue> {
    let c = truth_to_computation(x, kind)?;
    Ok(computation_to_truth(c.bind(move |a| Ok(unit(kind, op(a))))?))
}

pub(crate) fn lifted_binary(
    kind: MonadKind,
    x: &TruthValue,
    y: &TruthValue,
    op: fn(bool, bool) -> bool,
) -> Result<TruthValue> {
    let cx = truth_to_computation(x, kind)?;
    let cy = truth_to_computation(y, kind)?;
    let out = cx.bind(move |a| cy.clone().bind(move |b| Ok(unit(kind, op(a, b)))))?;
    Ok(computation_to_truth(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Lp3;
    use crate::effects::{realize, RandomKey, Report};

    #[test]
    fn identity_lift_is_boolean() {
        let b = TruthAlgebra::boolean();
        assert_eq!(lift_algebra(&b, MonadKind::Identity).unwrap(), b);
    }

    #[test]
    fn nonempty_lift_matches_priest() {
        let lifted = lift_algebra(&TruthAlgebra::boolean(), MonadKind::NonEmptySet).unwrap();
        let priest = TruthAlgebra::priest();
        let both = TruthValue::Lp3(Lp3::B);
        let t = TruthValue::Lp3(Lp3::T);
        assert_eq!(lifted.conj(&both, &t).unwrap(), both);
        for a in Lp3::ALL {
            let a = TruthValue::Lp3(a);
            assert_eq!(lifted.neg(&a).unwrap(), priest.neg(&a).unwrap());
            for b in Lp3::ALL {
                let b = TruthValue::Lp3(b);
                assert_eq!(lifted.conj(&a, &b).unwrap(), priest.conj(&a, &b).unwrap());
                assert_eq!(lifted.disj(&a, &b).unwrap(), priest.disj(&a, &b).unwrap());
                assert_eq!(lifted.implies(&a, &b).unwrap(), priest.implies(&a, &b).unwrap());
            }
        }
    }

    #[test]
    fn distribution_lift_closed_forms() {
        let lifted = lift_algebra(&TruthAlgebra::boolean(), MonadKind::Distribution).unwrap();
        let (p, q) = (0.3, 0.6);
        let get = |v: TruthValue| v.as_f64().unwrap();
        let (x, y) = (TruthValue::Prob(p), TruthValue::Prob(q));
        assert!((get(lifted.conj(&x, &y).unwrap()) - p * q).abs() < 1e-12);
        assert!((get(lifted.disj(&x, &y).unwrap()) - (p + q - p * q)).abs() < 1e-12);
        assert!((get(lifted.neg(&x).unwrap()) - (1.0 - p)).abs() < 1e-12);
        assert!((get(lifted.implies(&x, &y).unwrap()) - (1.0 - p + p * q)).abs() < 1e-12);
    }

    #[test]
    fn sampler_lift_estimates_product() {
        let lifted = lift_algebra(&TruthAlgebra::boolean(), MonadKind::Sampler).unwrap();
        let v = lifted.conj(&TruthValue::Prob(0.5), &TruthValue::Prob(0.5)).unwrap();
        let c = truth_to_computation(&v, MonadKind::Sampler).unwrap();
        let Report::Estimate(e) = realize(&c, Some(40_000), &RandomKey::new(3)).unwrap() else {
            panic!()
        };
        assert!((e.estimate - 0.25).abs() < 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn only_boolean_lifts() {
        assert!(lift_algebra(&TruthAlgebra::product(), MonadKind::Distribution).is_err());
    }
}
