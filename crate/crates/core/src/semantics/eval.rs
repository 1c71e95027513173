use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{computation_to_truth, truth_to_computation, Quantifier, TruthValue, WeightedFamily};
use crate::effects::{realize, Computation, Distribution, MonadKind, RandomKey, Report, Sampler};
use crate::error::{Error, Result};
use crate::model::{DomainFamily, Interpretation, Value};
use crate::syntax::{Formula, Name, Term};

use super::framework::Framework;

/// Default per-element sample count for quantifiers nested inside draws.
pub const DEFAULT_INNER_SAMPLES: usize = 1000;

/// Assignment of values to variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Valuation(BTreeMap<Name, Value>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: &str, v: Value) {
        self.0.insert(name.into(), v);
    }

    /// `ν[x ↦ v]`.
    pub fn with(&self, name: &Name, v: Value) -> Self {
        let mut out = self.clone();
        out.0.insert(name.clone(), v);
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, Value)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (String, Value)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Sample counts for the sampler monad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Draws used to realise the sentence and each top-level quantifier body.
    pub samples: Option<usize>,
    /// Draws per quantifier element when the quantifier is evaluated inside
    /// a single draw of an enclosing bind.
    pub inner_samples: usize,
}

impl Budget {
    pub fn exact() -> Self {
        Budget { samples: None, inner_samples: DEFAULT_INNER_SAMPLES }
    }

    pub fn samples(n: usize) -> Self {
        Budget { samples: Some(n), inner_samples: DEFAULT_INNER_SAMPLES.min(n.max(1)) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::exact()
    }
}

/// The inductive evaluator for one framework and interpretation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    fw: Framework,
    interp: Arc<Interpretation>,
    budget: Budget,
}

impl Evaluator {
    pub fn new(fw: Framework, interp: Arc<Interpretation>, budget: Budget) -> Result<Self> {
        if interp.kind() != fw.monad() {
            return Err(Error::IncompatibleFramework(format!(
                "interpretation was loaded for the {} monad but the framework uses {}",
                interp.kind().cli_name(),
                fw.monad().cli_name()
            )));
        }
        Ok(Evaluator { fw, interp, budget })
    }

    pub fn framework(&self) -> &Framework {
        &self.fw
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn term(&self, t: &Term, nu: &Valuation) -> Result<Value> {
        eval_term(t, &self.interp, nu)
    }

    /// `⟦f⟧_ν` as an element of the framework's truth space.
    pub fn formula(&self, f: &Formula, nu: &Valuation, key: &RandomKey) -> Result<TruthValue> {
        self.eval(f, nu, key, false)
    }

    fn eval(&self, f: &Formula, nu: &Valuation, key: &RandomKey, nested: bool) -> Result<TruthValue> {
        let alg = self.fw.connectives();
        match f {
            Formula::Top => Ok(alg.top()),
            Formula::Bot => Ok(alg.bot()),
            Formula::Prop(p) => self.atom(p, &[], nu),
            Formula::Atom { pred, args } => self.atom(pred, args, nu),
            Formula::MProp(p) => self.matom(p, &[], nu),
            Formula::MAtom { pred, args } => self.matom(pred, args, nu),
            Formula::Not(g) => alg.neg(&self.eval(g, nu, key, nested)?),
            Formula::And(g, h) => {
                let (a, b) = self.pair(g, h, nu, key, nested)?;
                alg.conj(&a, &b)
            }
            Formula::Or(g, h) => {
                let (a, b) = self.pair(g, h, nu, key, nested)?;
                alg.disj(&a, &b)
            }
            Formula::Implies(g, h) => {
                let (a, b) = self.pair(g, h, nu, key, nested)?;
                alg.implies(&a, &b)
            }
            Formula::Forall { var, sort, body } => {
                self.quantifier(Quantifier::Forall, var, sort, body, nu, key, nested)
            }
            Formula::Exists { var, sort, body } => {
                self.quantifier(Quantifier::Exists, var, sort, body, nu, key, nested)
            }
            Formula::Bind { var, mfunc, args, body } => self.bind(var, mfunc, args, body, nu, key),
        }
    }

    fn pair(
        &self,
        g: &Formula,
        h: &Formula,
        nu: &Valuation,
        key: &RandomKey,
        nested: bool,
    ) -> Result<(TruthValue, TruthValue)> {
        Ok((self.eval(g, nu, &key.child(0), nested)?, self.eval(h, nu, &key.child(1), nested)?))
    }

    fn args(&self, args: &[Term], nu: &Valuation) -> Result<Vec<Value>> {
        args.iter().map(|t| eval_term(t, &self.interp, nu)).collect()
    }

    /// `η_Ω(I(P)(⟦args⟧))`; comparisons yield robustness under STL.
    fn atom(&self, pred: &str, args: &[Term], nu: &Valuation) -> Result<TruthValue> {
        let vals = self.args(args, nu)?;
        if self.fw.is_stl() {
            if let Some(cmp) = self.interp.comparison(pred) {
                return Ok(TruthValue::XReal(cmp.robustness(&vals)?));
            }
        }
        let b = self.interp.apply_predicate(pred, &vals)?;
        Ok(self.fw.connectives().from_bool(b))
    }

    fn matom(&self, pred: &str, args: &[Term], nu: &Valuation) -> Result<TruthValue> {
        match self.fw.monad() {
            MonadKind::Identity => {
                return Err(Error::IncompatibleFramework(format!(
                    "computational predicate `{pred}` cannot be read classically; transform the interpretation first"
                )))
            }
            _ if self.fw.is_stl() => {
                return Err(Error::IncompatibleFramework(format!(
                    "computational predicate `{pred}` has no robustness reading under stl"
                )))
            }
            _ => {}
        }
        let vals = self.args(args, nu)?;
        Ok(computation_to_truth(self.interp.apply_mpred(pred, &vals)?))
    }

    #[allow(clippy::too_many_arguments)]
    fn quantifier(
        &self,
        q: Quantifier,
        var: &Name,
        sort: &str,
        body: &Formula,
        nu: &Valuation,
        key: &RandomKey,
        nested: bool,
    ) -> Result<TruthValue> {
        let sampler = self.fw.monad() == MonadKind::Sampler;
        let points = if nested { Some(self.budget.inner_samples) } else { self.budget.samples };
        let family = self.interp.quantifier_family(sort, points, &key.child(0))?;
        let elements = key.child(1);
        // Points of a sampled family are realised with the inner budget.
        let value_at = |i: usize, a: Value, inner: bool| -> Result<TruthValue> {
            let ekey = elements.child(i as u64);
            let v = self.eval(body, &nu.with(var, a), &ekey.child(0), inner)?;
            if sampler {
                self.probability(v, &ekey.child(1), inner)
            } else {
                Ok(v)
            }
        };
        let family = match family {
            DomainFamily::Exact(items) => WeightedFamily::Exact(
                items
                    .into_iter()
                    .enumerate()
                    .map(|(i, (w, a))| Ok((w, value_at(i, a, nested)?)))
                    .collect::<Result<_>>()?,
            ),
            DomainFamily::Sampled(items) => WeightedFamily::Sampled(
                items.into_iter().enumerate().map(|(i, a)| value_at(i, a, true)).collect::<Result<_>>()?,
            ),
        };
        self.fw.algebra().aggregate(q, &family)
    }

    /// Reads a sampler-framework truth value as a probability, realising
    /// boolean samplers with the applicable budget.
    fn probability(&self, v: TruthValue, key: &RandomKey, nested: bool) -> Result<TruthValue> {
        match v {
            TruthValue::B2(b) => Ok(TruthValue::Prob(f64::from(u8::from(b)))),
            TruthValue::BoolSampler(s) => {
                if let Some(&b) = s.as_constant() {
                    return Ok(TruthValue::Prob(f64::from(u8::from(b))));
                }
                let n = if nested { Some(self.budget.inner_samples) } else { self.budget.samples };
                match realize(&Computation::Sampler(s), n, key)? {
                    Report::Estimate(e) => Ok(TruthValue::Estimate { value: e.estimate, stderr: e.stderr }),
                    other => unreachable!("sampler realised as {other:?}"),
                }
            }
            other => Ok(other),
        }
    }

    fn bind(
        &self,
        var: &Name,
        mfunc: &str,
        args: &[Term],
        body: &Arc<Formula>,
        nu: &Valuation,
        key: &RandomKey,
    ) -> Result<TruthValue> {
        let vals = self.args(args, nu)?;
        let c = self.interp.apply_computational(mfunc, &vals)?;
        if self.fw.is_stl() {
            return self.stl_expectation(c, var, body, nu, key);
        }
        let kind = self.fw.monad();
        let (ev, body, nu, var, key) = (self.clone(), body.clone(), nu.clone(), var.clone(), *key);
        let out = if kind == MonadKind::Sampler {
            // The body is evaluated once per draw, under that draw's key.
            c.bind(move |a| {
                let (ev, body, nu) = (ev.clone(), body.clone(), nu.with(&var, a));
                Ok(Computation::Sampler(Sampler::new(move |k: &RandomKey| {
                    let v = ev.eval(&body, &nu, &k.child(0), true)?;
                    truth_to_computation(&v, MonadKind::Sampler)?.sample(&k.child(1))
                })))
            })?
        } else {
            c.bind(move |a| {
                let v = ev.eval(&body, &nu.with(&var, a), &key, false)?;
                truth_to_computation(&v, kind)
            })?
        };
        Ok(computation_to_truth(out))
    }

    /// Expected robustness `Σ_a ρ(a) ⟦F⟧_{ν[x↦a]}`.
    fn stl_expectation(
        &self,
        c: Computation<Value>,
        var: &Name,
        body: &Formula,
        nu: &Valuation,
        key: &RandomKey,
    ) -> Result<TruthValue> {
        let dist: Distribution<Value> = match c {
            Computation::Dist(d) => d,
            Computation::Pure(v) => Distribution::dirac(v),
            other => {
                return Err(Error::IncompatibleFramework(format!(
                    "stl needs finite distributions, got a {} computation",
                    other.kind()
                )))
            }
        };
        let mut total = 0.0;
        for (a, p) in dist.entries() {
            let v = self.eval(body, &nu.with(var, a.clone()), key, false)?;
            let x = v
                .as_f64()
                .ok_or_else(|| Error::CarrierMismatch(format!("stl bind body produced {v}")))?;
            total += p * x;
        }
        if total.is_nan() {
            return Err(Error::Type("expected robustness is undefined (inf - inf)".into()));
        }
        Ok(TruthValue::XReal(total))
    }
}

/// `⟦t⟧_ν`.
pub fn eval_term(t: &Term, interp: &Interpretation, nu: &Valuation) -> Result<Value> {
    match t {
        Term::Variable { name, .. } => {
            nu.get(name).cloned().ok_or_else(|| Error::UnboundVariable(name.to_string()))
        }
        Term::Literal(n) => Ok(Value::from_number(*n)),
        Term::Apply { symbol, args, .. } => {
            let vals = args.iter().map(|a| eval_term(a, interp, nu)).collect::<Result<Vec<_>>>()?;
            interp.apply_function(symbol, &vals)
        }
    }
}

/// Evaluates `f` under `nu` with a fresh evaluator.
pub fn eval_formula(
    f: &Formula,
    fw: &Framework,
    interp: &Arc<Interpretation>,
    nu: &Valuation,
    budget: Budget,
    key: &RandomKey,
) -> Result<TruthValue> {
    Evaluator::new(*fw, interp.clone(), budget)?.formula(f, nu, key)
}
