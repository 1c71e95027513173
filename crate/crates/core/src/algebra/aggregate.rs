//! Quantifier aggregators over weighted families of truth values.

use crate::effects::MonadKind;
use crate::error::{Error, Result};

use super::stl::{and_r, or_r};
use super::table::{AlgebraKind, TruthAlgebra};
use super::value::{Lp3, TruthValue};

/// Values below this are treated as exactly 0 before taking logarithms.
pub const LN_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// A family of truth values to be aggregated by a quantifier.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightedFamily {
    /// `(weight, value)` pairs from a finite, weighted domain.
    Exact(Vec<(f64, TruthValue)>),
    /// Values at `N` points drawn from the sort's density.
    Sampled(Vec<TruthValue>),
}

impl WeightedFamily {
    pub fn unit(values: Vec<TruthValue>) -> Self {
        WeightedFamily::Exact(values.into_iter().map(|v| (1.0, v)).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            WeightedFamily::Exact(v) => v.len(),
            WeightedFamily::Sampled(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn ln0(x: f64) -> f64 {
    if x < LN_FLOOR {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// Inner transform `g` of an aggregator `h(Σ w g(v) / W)`.
#[derive(Debug, Clone, Copy)]
enum Inner {
    Ln,
    LnCompl,
    Pow(f64),
    PowCompl(f64),
    NegLnPow(f64),
    NegLnComplPow(f64),
}

impl Inner {
    fn g(self, v: f64) -> f64 {
        match self {
            Inner::Ln => ln0(v),
            Inner::LnCompl => ln0(1.0 - v),
            Inner::Pow(p) => v.powf(p),
            Inner::PowCompl(p) => (1.0 - v).powf(p),
            Inner::NegLnPow(q) => (-ln0(v)).max(0.0).powf(q),
            Inner::NegLnComplPow(q) => (-ln0(1.0 - v)).max(0.0).powf(q),
        }
    }

    fn dg(self, v: f64) -> f64 {
        match self {
            Inner::Ln => 1.0 / v,
            Inner::LnCompl => -1.0 / (1.0 - v),
            Inner::Pow(p) => p * v.powf(p - 1.0),
            Inner::PowCompl(p) => -p * (1.0 - v).powf(p - 1.0),
            Inner::NegLnPow(q) => -q * (-ln0(v)).max(0.0).powf(q - 1.0) / v,
            Inner::NegLnComplPow(q) => q * (-ln0(1.0 - v)).max(0.0).powf(q - 1.0) / (1.0 - v),
        }
    }
}

/// Outer transform `h`.
#[derive(Debug, Clone, Copy)]
enum Outer {
    Exp,
    OneMinusExp,
    Root(f64),
    OneMinusRoot(f64),
    ExpNegRoot(f64),
    OneMinusExpNegRoot(f64),
}

impl Outer {
    fn h(self, s: f64) -> f64 {
        match self {
            Outer::Exp => s.exp(),
            Outer::OneMinusExp => 1.0 - s.exp(),
            Outer::Root(p) => s.powf(1.0 / p),
            Outer::OneMinusRoot(p) => 1.0 - s.powf(1.0 / p),
            Outer::ExpNegRoot(q) => (-s.powf(1.0 / q)).exp(),
            Outer::OneMinusExpNegRoot(q) => 1.0 - (-s.powf(1.0 / q)).exp(),
        }
    }

    fn dh(self, s: f64) -> f64 {
        match self {
            Outer::Exp => s.exp(),
            Outer::OneMinusExp => -s.exp(),
            Outer::Root(p) => s.powf(1.0 / p - 1.0) / p,
            Outer::OneMinusRoot(p) => -s.powf(1.0 / p - 1.0) / p,
            Outer::ExpNegRoot(q) => -(-s.powf(1.0 / q)).exp() * s.powf(1.0 / q - 1.0) / q,
            Outer::OneMinusExpNegRoot(q) => (-s.powf(1.0 / q)).exp() * s.powf(1.0 / q - 1.0) / q,
        }
    }
}

/// `(g, h, normalised)` for a probability-valued algebra.
fn transforms(kind: AlgebraKind, q: Quantifier) -> (Inner, Outer, bool) {
    use Quantifier::*;
    match (kind, q) {
        (AlgebraKind::LtnP { p }, Exists) => (Inner::Pow(p), Outer::Root(p), true),
        (AlgebraKind::LtnP { p }, Forall) => (Inner::PowCompl(p), Outer::OneMinusRoot(p), true),
        (AlgebraKind::LtnQ { q }, Forall) => (Inner::NegLnPow(q), Outer::ExpNegRoot(q), true),
        (AlgebraKind::LtnQ { q }, Exists) => (Inner::NegLnComplPow(q), Outer::OneMinusExpNegRoot(q), true),
        (_, Forall) => (Inner::Ln, Outer::Exp, false),
        (_, Exists) => (Inner::LnCompl, Outer::OneMinusExp, false),
    }
}

impl TruthAlgebra {
    /// Aggregates a family with the algebra's `aggr∀` or `aggr∃`.
    ///
    /// Probability-valued results become [`TruthValue::Estimate`] when the
    /// family is sampled or contains estimates; the standard error is
    /// propagated with the delta method.
    pub fn aggregate(&self, q: Quantifier, fam: &WeightedFamily) -> Result<TruthValue> {
        match self.kind() {
            AlgebraKind::Boolean | AlgebraKind::Lifted(MonadKind::Identity) => {
                let vals = self.exact_support(fam)?;
                let bools = vals.iter().map(|v| self.bool_of(v)).collect::<Result<Vec<_>>>()?;
                Ok(TruthValue::B2(match q {
                    Quantifier::Forall => bools.iter().all(|b| *b),
                    Quantifier::Exists => bools.iter().any(|b| *b),
                }))
            }
            AlgebraKind::Priest | AlgebraKind::Lifted(MonadKind::NonEmptySet) => {
                let vals = self.exact_support(fam)?;
                let lps = vals.iter().map(|v| self.lp3_of(v)).collect::<Result<Vec<_>>>()?;
                Ok(TruthValue::Lp3(match q {
                    Quantifier::Forall => lps.into_iter().min().unwrap_or(Lp3::T),
                    Quantifier::Exists => lps.into_iter().max().unwrap_or(Lp3::F),
                }))
            }
            AlgebraKind::StlR { r } => {
                let WeightedFamily::Exact(items) = fam else {
                    return Err(Error::ExactOnly(format!("{} aggregates finite families only", self.name())));
                };
                let mut pairs = Vec::with_capacity(items.len());
                for (w, v) in items {
                    check_weight(*w)?;
                    pairs.push((*w, self.xreal_of(v)?));
                }
                if !pairs.iter().any(|(w, _)| *w > 0.0) {
                    return Err(Error::EmptyFamily);
                }
                Ok(TruthValue::XReal(match q {
                    Quantifier::Forall => and_r(r, &pairs),
                    Quantifier::Exists => or_r(r, &pairs),
                }))
            }
            kind => self.aggregate_prob(kind, q, fam),
        }
    }

    /// Values of positive weight in an exact family.
    fn exact_support<'f>(&self, fam: &'f WeightedFamily) -> Result<Vec<&'f TruthValue>> {
        let WeightedFamily::Exact(items) = fam else {
            return Err(Error::ExactOnly(format!("{} aggregates finite families only", self.name())));
        };
        let mut out = Vec::with_capacity(items.len());
        for (w, v) in items {
            check_weight(*w)?;
            if *w > 0.0 {
                out.push(v);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(out)
    }

    fn aggregate_prob(&self, kind: AlgebraKind, q: Quantifier, fam: &WeightedFamily) -> Result<TruthValue> {
        let (inner, outer, normalised) = transforms(kind, q);
        // (weight, value, stderr of value)
        let mut items = Vec::with_capacity(fam.len());
        let sampled = matches!(fam, WeightedFamily::Sampled(_));
        match fam {
            WeightedFamily::Exact(pairs) => {
                for (w, v) in pairs {
                    check_weight(*w)?;
                    if *w > 0.0 {
                        items.push((*w, self.prob_of(v)?, v.stderr()));
                    }
                }
            }
            WeightedFamily::Sampled(vals) => {
                let w = 1.0 / vals.len() as f64;
                for v in vals {
                    items.push((w, self.prob_of(v)?, v.stderr()));
                }
            }
        }
        if items.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for (_, v, _) in &items {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::CarrierMismatch(format!("{v} is not a probability")));
            }
        }
        let total: f64 = if normalised { items.iter().map(|(w, _, _)| w).sum() } else { 1.0 };
        let gs: Vec<f64> = items.iter().map(|(_, v, _)| inner.g(*v)).collect();
        let s: f64 = items.iter().zip(&gs).map(|((w, _, _), g)| w * g).sum::<f64>() / total;
        let value = outer.h(s);

        let has_estimates = items.iter().any(|(_, _, se)| se.is_some());
        if !sampled && !has_estimates {
            return Ok(TruthValue::Prob(value));
        }
        let stderr = if sampled {
            // Spread of the per-sample terms around their mean.
            let n = gs.len() as f64;
            let var = gs.iter().map(|g| (g - s) * (g - s)).sum::<f64>() / n;
            outer.dh(s).abs() * (var / n).sqrt()
        } else {
            let acc: f64 = items
                .iter()
                .map(|(w, v, se)| {
                    let d = w / total * inner.dg(*v) * se.unwrap_or(0.0);
                    if se.unwrap_or(0.0) == 0.0 {
                        0.0
                    } else {
                        d * d
                    }
                })
                .sum();
            outer.dh(s).abs() * acc.sqrt()
        };
        // An absorbing member (ln 0) leaves no spread to estimate.
        let stderr = if stderr.is_finite() { stderr } else { 0.0 };
        Ok(TruthValue::Estimate { value, stderr })
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeWeight(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_algebra;

    fn probs(values: &[f64]) -> Vec<TruthValue> {
        values.iter().map(|&v| TruthValue::Prob(v)).collect()
    }

    fn value(v: TruthValue) -> f64 {
        v.as_f64().unwrap()
    }

    #[test]
    fn product_unit_weights_is_plain_product() {
        let a = TruthAlgebra::product();
        let fam = WeightedFamily::unit(probs(&[0.5, 0.5]));
        assert!((value(a.aggregate(Quantifier::Forall, &fam).unwrap()) - 0.25).abs() < 1e-15);
        assert!((value(a.aggregate(Quantifier::Exists, &fam).unwrap()) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn product_mean_weights_is_geometric_mean() {
        let a = TruthAlgebra::product();
        let fam = WeightedFamily::Exact(vec![(0.5, TruthValue::Prob(0.5)), (0.5, TruthValue::Prob(0.5))]);
        assert!((value(a.aggregate(Quantifier::Forall, &fam).unwrap()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ltn_p2_forall_example() {
        let a = parse_algebra("ltn:p=2").unwrap();
        let fam = WeightedFamily::unit(probs(&[1.0, 0.0]));
        let v = value(a.aggregate(Quantifier::Forall, &fam).unwrap());
        assert!((v - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert!((v - 0.29289).abs() < 1e-5);
    }

    #[test]
    fn zero_absorbs_forall() {
        let a = TruthAlgebra::product();
        let fam = WeightedFamily::unit(probs(&[0.9, 0.0, 0.7]));
        assert_eq!(value(a.aggregate(Quantifier::Forall, &fam).unwrap()), 0.0);
        let q = parse_algebra("ltnq:q=0.5").unwrap();
        assert_eq!(value(q.aggregate(Quantifier::Forall, &fam).unwrap()), 0.0);
    }

    #[test]
    fn lattice_aggregators() {
        let b = TruthAlgebra::boolean();
        let fam = WeightedFamily::Exact(vec![(1.0, TruthValue::B2(true)), (0.0, TruthValue::B2(false))]);
        assert_eq!(b.aggregate(Quantifier::Forall, &fam).unwrap(), TruthValue::B2(true));
        let p = TruthAlgebra::priest();
        let fam = WeightedFamily::unit(vec![TruthValue::Lp3(Lp3::T), TruthValue::Lp3(Lp3::B)]);
        assert_eq!(p.aggregate(Quantifier::Forall, &fam).unwrap(), TruthValue::Lp3(Lp3::B));
        assert_eq!(p.aggregate(Quantifier::Exists, &fam).unwrap(), TruthValue::Lp3(Lp3::T));
    }

    #[test]
    fn family_errors() {
        let b = TruthAlgebra::boolean();
        let sampled = WeightedFamily::Sampled(vec![TruthValue::B2(true)]);
        assert!(matches!(b.aggregate(Quantifier::Forall, &sampled), Err(Error::ExactOnly(_))));
        let zero = WeightedFamily::Exact(vec![(0.0, TruthValue::Prob(0.3))]);
        assert!(matches!(TruthAlgebra::product().aggregate(Quantifier::Forall, &zero), Err(Error::EmptyFamily)));
        let neg = WeightedFamily::Exact(vec![(-1.0, TruthValue::Prob(0.3))]);
        assert!(matches!(
            TruthAlgebra::product().aggregate(Quantifier::Forall, &neg),
            Err(Error::NegativeWeight(_))
        ));
        assert!(matches!(
            TruthAlgebra::product().aggregate(Quantifier::Forall, &WeightedFamily::Sampled(vec![])),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    fn sampled_product_is_geometric_mean_with_stderr() {
        let a = TruthAlgebra::product();
        let fam = WeightedFamily::Sampled(probs(&[0.25, 1.0]));
        let TruthValue::Estimate { value, stderr } = a.aggregate(Quantifier::Forall, &fam).unwrap() else {
            panic!()
        };
        assert!((value - 0.5).abs() < 1e-15);
        // ln terms are -ln4 and 0: spread ln2, so stderr = 0.5 * ln2 / sqrt(2).
        assert!((stderr - 0.5 * 2f64.ln() / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn estimates_propagate_through_exact_families() {
        let a = TruthAlgebra::product();
        let fam = WeightedFamily::unit(vec![
            TruthValue::Estimate { value: 0.5, stderr: 0.01 },
            TruthValue::Prob(0.5),
        ]);
        let TruthValue::Estimate { value, stderr } = a.aggregate(Quantifier::Forall, &fam).unwrap() else {
            panic!()
        };
        assert!((value - 0.25).abs() < 1e-15);
        // d(xy)/dx = y = 0.5.
        assert!((stderr - 0.005).abs() < 1e-12);
    }
}
