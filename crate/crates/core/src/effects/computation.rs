use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

use super::key::RandomKey;

/// Probability entries below this are dropped during canonicalisation.
pub const PROB_FLOOR: f64 = 1e-15;
/// Allowed deviation of a distribution's total mass from 1.
pub const MASS_TOLERANCE: f64 = 1e-9;

static BREAK_DIST_BIND: AtomicBool = AtomicBool::new(false);

/// Test hook: makes distribution bind ignore the outer weights so the law
/// suites have something to catch. Never enable outside harness checks.
#[doc(hidden)]
pub fn set_broken_dist_bind(on: bool) {
    BREAK_DIST_BIND.store(on, Ordering::SeqCst);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonadKind {
    Identity,
    NonEmptySet,
    Distribution,
    Sampler,
}

impl MonadKind {
    pub const ALL: [MonadKind; 4] =
        [MonadKind::Identity, MonadKind::NonEmptySet, MonadKind::Distribution, MonadKind::Sampler];

    /// Name accepted on the command line.
    pub fn cli_name(&self) -> &'static str {
        match self {
            MonadKind::Identity => "classical",
            MonadKind::NonEmptySet => "lp",
            MonadKind::Distribution => "dist",
            MonadKind::Sampler => "sampler",
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, MonadKind::Sampler)
    }
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonadKind::Identity => "identity",
            MonadKind::NonEmptySet => "nonempty_set",
            MonadKind::Distribution => "distribution",
            MonadKind::Sampler => "sampler",
        })
    }
}

impl FromStr for MonadKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" | "identity" => Ok(MonadKind::Identity),
            "lp" | "nonempty_set" => Ok(MonadKind::NonEmptySet),
            "dist" | "distribution" => Ok(MonadKind::Distribution),
            "sampler" => Ok(MonadKind::Sampler),
            other => Err(Error::UnknownMonad(other.to_string())),
        }
    }
}

/// Non-empty finite set, stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NonEmpty<T>(Vec<T>);

impl<T: Ord> NonEmpty<T> {
    pub fn new(mut items: Vec<T>) -> Option<Self> {
        if items.is_empty() {
            return None;
        }
        items.sort();
        items.dedup();
        Some(NonEmpty(items))
    }

    pub fn singleton(v: T) -> Self {
        NonEmpty(vec![v])
    }

    pub fn contains(&self, v: &T) -> bool {
        self.0.binary_search(v).is_ok()
    }
}

impl<T> NonEmpty<T> {
    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

/// Finitely supported probability distribution in canonical form: support
/// sorted, duplicates merged, negligible entries dropped, mass renormalised.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    entries: Vec<(T, f64)>,
}

impl<T: Ord + Clone> Distribution<T> {
    /// Validates and canonicalises `(value, probability)` pairs.
    pub fn new(entries: Vec<(T, f64)>) -> Result<Self> {
        for (_, p) in &entries {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::InvalidDistribution(format!("probability {p} is not in [0, 1]")));
            }
        }
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}, not 1")));
        }
        Self::canonical(entries)
    }

    pub fn dirac(v: T) -> Self {
        Distribution { entries: vec![(v, 1.0)] }
    }

    /// Uniform distribution over the distinct members of `values`.
    pub fn uniform(values: Vec<T>) -> Result<Self> {
        let set = NonEmpty::new(values)
            .ok_or_else(|| Error::InvalidDistribution("empty support".into()))?;
        let p = 1.0 / set.len() as f64;
        Self::canonical(set.into_vec().into_iter().map(|v| (v, p)).collect())
    }

    fn canonical(mut entries: Vec<(T, f64)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(T, f64)> = Vec::with_capacity(entries.len());
        for (v, p) in entries {
            match merged.last_mut() {
                Some((last, q)) if *last == v => *q += p,
                _ => merged.push((v, p)),
            }
        }
        merged.retain(|(_, p)| *p >= PROB_FLOOR);
        let total: f64 = merged.iter().map(|(_, p)| p).sum();
        if merged.is_empty() || total <= 0.0 {
            return Err(Error::InvalidDistribution("no probability mass".into()));
        }
        for (_, p) in &mut merged {
            *p /= total;
        }
        Ok(Distribution { entries: merged })
    }

    pub fn prob(&self, v: &T) -> f64 {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(v))
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn support(&self) -> Vec<T> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    pub fn is_dirac(&self) -> bool {
        self.entries.len() == 1
    }

    /// Equal supports and probabilities within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((a, p), (b, q))| a == b && (p - q).abs() <= tol)
    }

    /// Inverse-CDF draw from a uniform number in `[0, 1)`.
    pub fn pick(&self, u: f64) -> &T {
        let mut acc = 0.0;
        for (v, p) in &self.entries {
            acc += p;
            if u < acc {
                return v;
            }
        }
        &self.entries[self.entries.len() - 1].0
    }
}

impl<T> Distribution<T> {
    pub fn entries(&self) -> &[(T, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

type DrawFn<T> = dyn Fn(&RandomKey) -> Result<T> + Send + Sync;

/// Sampling procedure, a pure function of its key.
pub struct Sampler<T> {
    draw: Arc<DrawFn<T>>,
    constant: Option<T>,
}

impl<T: Clone> Clone for Sampler<T> {
    fn clone(&self) -> Self {
        Sampler { draw: self.draw.clone(), constant: self.constant.clone() }
    }
}

impl<T: fmt::Debug> fmt::Debug for Sampler<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constant {
            Some(v) => write!(f, "Sampler(const {v:?})"),
            None => f.write_str("Sampler(<procedure>)"),
        }
    }
}

impl<T: Clone + Send + Sync + 'static> Sampler<T> {
    pub fn new(draw: impl Fn(&RandomKey) -> Result<T> + Send + Sync + 'static) -> Self {
        Sampler { draw: Arc::new(draw), constant: None }
    }

    pub fn constant(v: T) -> Self {
        let c = v.clone();
        Sampler { draw: Arc::new(move |_| Ok(c.clone())), constant: Some(v) }
    }

    pub fn sample(&self, key: &RandomKey) -> Result<T> {
        match &self.constant {
            Some(v) => Ok(v.clone()),
            None => (self.draw)(key),
        }
    }

    /// The value if the sampler ignores its key.
    pub fn as_constant(&self) -> Option<&T> {
        self.constant.as_ref()
    }

    pub fn from_distribution(d: Distribution<T>) -> Self
    where
        T: Ord,
    {
        if d.is_dirac() {
            return Sampler::constant(d.entries[0].0.clone());
        }
        Sampler::new(move |key| Ok(d.pick(key.uniform()).clone()))
    }
}

impl Sampler<bool> {
    pub fn bernoulli(p: f64) -> Self {
        if p >= 1.0 {
            Sampler::constant(true)
        } else if p <= 0.0 {
            Sampler::constant(false)
        } else {
            Sampler::new(move |key| Ok(key.uniform() < p))
        }
    }
}

/// An effectful value in one of the supported monads.
#[derive(Debug, Clone)]
pub enum Computation<T> {
    Pure(T),
    Set(NonEmpty<T>),
    Dist(Distribution<T>),
    Sampler(Sampler<T>),
}

impl<T: PartialEq> PartialEq for Computation<T> {
    /// Structural equality; samplers are never equal.
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Computation::Pure(a), Computation::Pure(b)) => a == b,
            (Computation::Set(a), Computation::Set(b)) => a == b,
            (Computation::Dist(a), Computation::Dist(b)) => a == b,
            _ => false,
        }
    }
}

/// `η_X`: the unit of the chosen monad.
pub fn unit<T: Ord + Clone + Send + Sync + 'static>(kind: MonadKind, v: T) -> Computation<T> {
    match kind {
        MonadKind::Identity => Computation::Pure(v),
        MonadKind::NonEmptySet => Computation::Set(NonEmpty::singleton(v)),
        MonadKind::Distribution => Computation::Dist(Distribution::dirac(v)),
        MonadKind::Sampler => Computation::Sampler(Sampler::constant(v)),
    }
}

/// Kleisli extension: `bind(c, k) = k*(c)`.
pub fn bind<T, U, K>(c: Computation<T>, k: K) -> Result<Computation<U>>
where
    T: Ord + Clone + Send + Sync + 'static,
    U: Ord + Clone + Send + Sync + 'static,
    K: Fn(T) -> Result<Computation<U>> + Send + Sync + 'static,
{
    c.bind(k)
}

impl<T: Ord + Clone + Send + Sync + 'static> Computation<T> {
    pub fn kind(&self) -> MonadKind {
        match self {
            Computation::Pure(_) => MonadKind::Identity,
            Computation::Set(_) => MonadKind::NonEmptySet,
            Computation::Dist(_) => MonadKind::Distribution,
            Computation::Sampler(_) => MonadKind::Sampler,
        }
    }

    pub fn bind<U, K>(self, k: K) -> Result<Computation<U>>
    where
        U: Ord + Clone + Send + Sync + 'static,
        K: Fn(T) -> Result<Computation<U>> + Send + Sync + 'static,
    {
        match self {
            Computation::Pure(x) => match k(x)? {
                c @ Computation::Pure(_) => Ok(c),
                other => Err(mismatch(MonadKind::Identity, other.kind())),
            },
            Computation::Set(xs) => {
                let mut out = Vec::new();
                for x in xs.into_vec() {
                    match k(x)? {
                        Computation::Set(ys) => out.extend(ys.into_vec()),
                        other => return Err(mismatch(MonadKind::NonEmptySet, other.kind())),
                    }
                }
                Ok(Computation::Set(NonEmpty::new(out).expect("union of non-empty sets")))
            }
            Computation::Dist(d) => {
                let broken = BREAK_DIST_BIND.load(Ordering::Relaxed);
                let n = d.len() as f64;
                let mut out = Vec::new();
                for (x, p) in d.entries {
                    let weight = if broken { 1.0 / n } else { p };
                    match k(x)? {
                        Computation::Dist(inner) => {
                            out.extend(inner.entries.into_iter().map(|(y, q)| (y, weight * q)))
                        }
                        other => return Err(mismatch(MonadKind::Distribution, other.kind())),
                    }
                }
                let total: f64 = out.iter().map(|(_, p)| p).sum();
                if (total - 1.0).abs() > MASS_TOLERANCE {
                    return Err(Error::InvalidDistribution(format!("bind produced total mass {total}")));
                }
                Ok(Computation::Dist(Distribution::canonical(out)?))
            }
            Computation::Sampler(s) => {
                if let Some(x) = s.as_constant() {
                    return match k(x.clone())? {
                        c @ Computation::Sampler(_) => Ok(c),
                        other => Err(mismatch(MonadKind::Sampler, other.kind())),
                    };
                }
                Ok(Computation::Sampler(Sampler::new(move |key| {
                    let x = s.sample(&key.child(0))?;
                    match k(x)? {
                        Computation::Sampler(inner) => inner.sample(&key.child(1)),
                        other => Err(mismatch(MonadKind::Sampler, other.kind())),
                    }
                })))
            }
        }
    }

    /// Functorial map, `bind(c, unit ∘ f)`.
    pub fn map<U, F>(self, f: F) -> Result<Computation<U>>
    where
        U: Ord + Clone + Send + Sync + 'static,
        F: Fn(T) -> U + Send + Sync + 'static,
    {
        let kind = self.kind();
        self.bind(move |x| Ok(unit(kind, f(x))))
    }

    /// Draws one value; only samplers and pure values can be drawn.
    pub fn sample(&self, key: &RandomKey) -> Result<T> {
        match self {
            Computation::Pure(v) => Ok(v.clone()),
            Computation::Sampler(s) => s.sample(key),
            other => Err(mismatch(MonadKind::Sampler, other.kind())),
        }
    }
}

fn mismatch(expected: MonadKind, found: MonadKind) -> Error {
    Error::KindMismatch(format!("continuation returned a {found} computation inside a {expected} bind"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(entries: &[(i64, f64)]) -> Distribution<i64> {
        Distribution::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn units() {
        assert_eq!(unit(MonadKind::Identity, 5), Computation::Pure(5));
        assert_eq!(unit(MonadKind::NonEmptySet, 'a'), Computation::Set(NonEmpty::singleton('a')));
        assert_eq!(unit(MonadKind::Distribution, 1), Computation::Dist(dist(&[(1, 1.0)])));
        let Computation::Sampler(s) = unit(MonadKind::Sampler, 3) else { panic!() };
        assert_eq!(s.sample(&RandomKey::new(0)).unwrap(), 3);
    }

    #[test]
    fn identity_bind_applies_directly() {
        let c = Computation::Pure(5).bind(|x| Ok(Computation::Pure(x * 2))).unwrap();
        assert_eq!(c, Computation::Pure(10));
    }

    #[test]
    fn set_bind_is_union_of_images() {
        let c = Computation::Set(NonEmpty::new(vec![1, 2]).unwrap())
            .bind(|x| Ok(Computation::Set(NonEmpty::new(if x == 1 { vec![10] } else { vec![10, 20] }).unwrap())))
            .unwrap();
        assert_eq!(c, Computation::Set(NonEmpty::new(vec![10, 20]).unwrap()));
    }

    #[test]
    fn coin_marginal() {
        let coin = dist(&[(0, 0.5), (1, 0.5)]);
        let c = Computation::Dist(coin.clone())
            .bind(move |x| {
                Ok(Computation::Dist(if x == 0 { Distribution::dirac(0) } else { coin.clone() }))
            })
            .unwrap();
        let Computation::Dist(d) = c else { panic!() };
        assert!(d.approx_eq(&dist(&[(0, 0.75), (1, 0.25)]), 1e-15));
    }

    #[test]
    fn kind_mismatch() {
        let err = Computation::Pure(1).bind(|x| Ok(Computation::Dist(Distribution::dirac(x))));
        assert!(matches!(err, Err(Error::KindMismatch(_))));
        let err = Computation::Dist(Distribution::dirac(1)).bind(|x| Ok(Computation::Pure(x)));
        assert!(matches!(err, Err(Error::KindMismatch(_))));
    }

    #[test]
    fn distribution_validation_and_canonical_form() {
        assert!(matches!(Distribution::new(vec![(1, 0.5)]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(
            Distribution::new(vec![(1, 1.5), (2, -0.5)]),
            Err(Error::InvalidDistribution(_))
        ));
        let d = dist(&[(2, 0.25), (1, 0.5), (2, 0.25), (3, 1e-17)]);
        assert_eq!(d.entries(), &[(1, 0.5), (2, 0.5)]);
    }

    #[test]
    fn sampler_bind_uses_child_keys() {
        let coin = Sampler::new(|k: &RandomKey| Ok(i64::from(k.uniform() < 0.5)));
        let inner = coin.clone();
        let c = Computation::Sampler(coin)
            .bind(move |x| {
                let inner = inner.clone();
                Ok(Computation::Sampler(Sampler::new(move |k| Ok(x + inner.sample(k)?))))
            })
            .unwrap();
        let key = RandomKey::new(11);
        let expected = i64::from(key.child(0).uniform() < 0.5) + i64::from(key.child(1).uniform() < 0.5);
        assert_eq!(c.sample(&key).unwrap(), expected);
    }
}
