//! Randomized law and oracle checks, run by `nesy selftest`.

pub mod checks;
pub mod gen;
pub mod laws;

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Absolute tolerance for exact probability comparisons.
pub const PROB_TOL: f64 = 1e-12;

/// Outcome of one named suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Suite {
    pub fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: 0, first_failure: None }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.record(msg());
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.cases += 1;
        self.record(msg);
    }

    fn record(&mut self, msg: String) {
        self.failures += 1;
        self.first_failure.get_or_insert(msg);
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<24} {} cases, {} failures", self.name, self.cases, self.failures)?;
        if let Some(msg) = &self.first_failure {
            write!(f, "\n     first failure: {msg}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Algebra and monad laws only.
    Laws,
    /// Laws plus the evaluation and transformation oracles.
    All,
}

type SuiteFn = fn(&mut ChaCha8Rng, &mut Suite);

const LAWS: &[(&str, SuiteFn)] = &[
    ("monoid", laws::monoid),
    ("classical-limit", laws::classical_limit),
    ("duality", laws::duality),
    ("monotonicity", laws::monotonicity),
    ("lifted-closed-forms", laws::lifted_closed_forms),
    ("stl-convergence", laws::stl_convergence),
    ("monad-laws", laws::monad_laws),
    ("sampler-laws", laws::sampler_laws),
];

const ORACLES: &[(&str, SuiteFn)] = &[
    ("propositional-oracle", checks::propositional_oracle),
    ("quantifier-consistency", checks::quantifier_consistency),
    ("ltn-limits", checks::ltn_limits),
    ("dirac-collapse", checks::dirac_collapse),
    ("argmax-idempotence", checks::argmax_idempotence),
    ("sampler-agreement", checks::sampler_agreement),
    ("wmc-equivalence", checks::wmc_equivalence),
];

/// Names of the suites in `scope`, in run order.
pub fn suite_names(scope: Scope) -> Vec<&'static str> {
    suites(scope).map(|(n, _)| *n).collect()
}

fn suites(scope: Scope) -> impl Iterator<Item = &'static (&'static str, SuiteFn)> {
    let oracles: &[(&str, SuiteFn)] = if scope == Scope::All { ORACLES } else { &[] };
    LAWS.iter().chain(oracles)
}

/// Runs every suite in `scope`. Each suite gets its own generator derived
/// from `seed` and its position, so results do not depend on which other
/// suites ran.
pub fn run(scope: Scope, seed: u64) -> Vec<Suite> {
    run_filtered(scope, seed, |_| true)
}

/// Like [`run`], restricted to suites whose name satisfies `keep`.
pub fn run_filtered(scope: Scope, seed: u64, keep: impl Fn(&str) -> bool) -> Vec<Suite> {
    suites(scope)
        .enumerate()
        .filter(|(_, (name, _))| keep(name))
        .map(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64));
            let mut suite = Suite::new(name);
            f(&mut rng, &mut suite);
            suite
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_bookkeeping() {
        let mut s = Suite::new("x");
        s.check(true, || unreachable!());
        s.check(false, || "first".into());
        s.fail("second".into());
        assert_eq!((s.cases, s.failures), (3, 2));
        assert_eq!(s.first_failure.as_deref(), Some("first"));
        assert!(!s.passed());
    }
}
