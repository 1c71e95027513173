use crate::algebra::Lp3;
use crate::error::{Error, Result};

use super::computation::{Computation, Sampler};
use super::key::RandomKey;

/// Monte Carlo summary of a boolean sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// A computation over `{0, 1}` read off as a number or truth value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Report {
    Boolean(bool),
    Lp3(Lp3),
    Probability(f64),
    Estimate(Estimate),
}

/// Realises a boolean computation. `samples` is required for samplers.
pub fn realize(c: &Computation<bool>, samples: Option<usize>, key: &RandomKey) -> Result<Report> {
    match c {
        Computation::Pure(b) => Ok(Report::Boolean(*b)),
        Computation::Set(s) => Ok(Report::Lp3(Lp3::from_set(s))),
        Computation::Dist(d) => Ok(Report::Probability(d.prob(&true))),
        Computation::Sampler(s) => {
            let n = match samples {
                Some(n) if n >= 1 => n,
                _ => return Err(Error::BudgetMissing("sampler realisation needs at least one sample".into())),
            };
            let hits = count_true(s, n, key)?;
            let estimate = hits as f64 / n as f64;
            Ok(Report::Estimate(Estimate {
                estimate,
                stderr: (estimate * (1.0 - estimate) / n as f64).sqrt(),
                samples: n,
                seed: key.seed(),
            }))
        }
    }
}

/// Number of true draws among `key.child(0..n)`. The count does not depend
/// on the order in which draws are made.
pub fn count_true(s: &Sampler<bool>, n: usize, key: &RandomKey) -> Result<usize> {
    if let Some(&b) = s.as_constant() {
        return Ok(if b { n } else { 0 });
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n as u64)
            .into_par_iter()
            .map(|i| s.sample(&key.child(i)).map(usize::from))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut hits = 0;
        for i in 0..n as u64 {
            hits += usize::from(s.sample(&key.child(i))?);
        }
        Ok(hits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::{Distribution, NonEmpty};

    #[test]
    fn exact_kinds() {
        let key = RandomKey::new(0);
        let d = Distribution::new(vec![(true, 0.25), (false, 0.75)]).unwrap();
        assert_eq!(realize(&Computation::Dist(d), None, &key).unwrap(), Report::Probability(0.25));
        let both = NonEmpty::new(vec![false, true]).unwrap();
        assert_eq!(realize(&Computation::Set(both), None, &key).unwrap(), Report::Lp3(Lp3::B));
        assert_eq!(realize(&Computation::Pure(true), None, &key).unwrap(), Report::Boolean(true));
    }

    #[test]
    fn constant_sampler() {
        let r = realize(&Computation::Sampler(Sampler::constant(true)), Some(100), &RandomKey::new(5)).unwrap();
        assert_eq!(
            r,
            Report::Estimate(Estimate { estimate: 1.0, stderr: 0.0, samples: 100, seed: 5 })
        );
    }

    #[test]
    fn sampler_needs_budget() {
        let c = Computation::Sampler(Sampler::bernoulli(0.5));
        assert!(matches!(realize(&c, None, &RandomKey::new(0)), Err(Error::BudgetMissing(_))));
        assert!(matches!(realize(&c, Some(0), &RandomKey::new(0)), Err(Error::BudgetMissing(_))));
    }

    #[test]
    fn reproducible_estimate() {
        let c = Computation::Sampler(Sampler::bernoulli(0.3));
        let a = realize(&c, Some(50_000), &RandomKey::new(42)).unwrap();
        let b = realize(&c, Some(50_000), &RandomKey::new(42)).unwrap();
        assert_eq!(a, b);
        let Report::Estimate(e) = a else { panic!() };
        assert!((e.estimate - 0.3).abs() < 4.0 * e.stderr, "{e:?}");
    }
}
