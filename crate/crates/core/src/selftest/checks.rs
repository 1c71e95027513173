//! Evaluation suites compared against independent oracles.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{AlgebraKind, Lp3, Quantifier, TruthAlgebra, TruthValue, WeightedFamily};
use crate::effects::MonadKind;
use crate::error::Result;
use crate::model::Interpretation;
use crate::semantics::{evaluate_sentence, Budget, EvalReport, Framework, ReportValue};
use crate::syntax::{Formula, Signature};
use crate::transforms::{argmax_interpretation, wmc, wmc_bruteforce};

use super::gen::{
    random_formula, random_network, random_network_formula, random_propositional, random_system, GenOptions,
};
use super::{Suite, PROB_TOL};

fn eval(f: &Formula, i: &Arc<Interpretation>, monad: MonadKind, budget: Budget, seed: u64) -> Result<EvalReport> {
    let fw = Framework::new(monad, None)?;
    evaluate_sentence(f, &fw, i, budget, seed)
}

/// Exact reference for the sampler: S-Product connectives are the lifted
/// Boolean ones on independent draws.
fn eval_sproduct(f: &Formula, i: &Arc<Interpretation>) -> Result<EvalReport> {
    let fw = Framework::new(MonadKind::Distribution, Some(TruthAlgebra::sproduct()))?;
    evaluate_sentence(f, &fw, i, Budget::exact(), 0)
}

fn truth_table(f: &Formula, env: &BTreeMap<&str, bool>) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Prop(p) => env[&**p],
        Formula::Not(g) => !truth_table(g, env),
        Formula::And(g, h) => truth_table(g, env) && truth_table(h, env),
        Formula::Or(g, h) => truth_table(g, env) || truth_table(h, env),
        Formula::Implies(g, h) => !truth_table(g, env) || truth_table(h, env),
        other => unreachable!("not propositional: {other}"),
    }
}

pub fn propositional_oracle(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    const ATOMS: usize = 4;
    let names: Vec<String> = (0..ATOMS).map(|k| format!("p{k}")).collect();
    let preds: serde_json::Map<String, serde_json::Value> =
        names.iter().map(|n| (n.clone(), json!({"args": []}))).collect();
    let sig: Signature = serde_json::from_value(json!({"sorts": [], "preds": preds})).expect("signature");
    let interps: Vec<(BTreeMap<&str, bool>, Arc<Interpretation>)> = (0..1u32 << ATOMS)
        .map(|mask| {
            let env: BTreeMap<&str, bool> =
                names.iter().enumerate().map(|(k, n)| (n.as_str(), mask >> k & 1 == 1)).collect();
            let tables: serde_json::Map<String, serde_json::Value> =
                env.iter().map(|(n, b)| (n.to_string(), json!({"rows": [[b]]}))).collect();
            let i = Interpretation::from_json(&json!({"preds": tables}), &sig, MonadKind::Identity)
                .expect("generated interpretation");
            (env, Arc::new(i))
        })
        .collect();
    for _ in 0..500 {
        let f = random_propositional(rng, ATOMS, 5);
        for (env, i) in &interps {
            let want = truth_table(&f, env);
            match eval(&f, i, MonadKind::Identity, Budget::exact(), 0) {
                Ok(r) => suite.check(r.value == ReportValue::Boolean(want), || {
                    format!("{f} under {env:?}: got {}, truth table {want}", r.value)
                }),
                Err(e) => suite.fail(format!("{f}: {e}")),
            }
        }
    }
}

/// Interpretation of `forall x:S. R(x)` with `R(a_k)` true with probability `v_k`.
fn family_system(values: &[f64], measure: Option<&str>) -> (Arc<Interpretation>, Formula) {
    let sig: Signature =
        serde_json::from_value(json!({"sorts": ["S"], "mpreds": {"R": {"args": ["S"]}}})).expect("signature");
    let elems: Vec<String> = (0..values.len()).map(|k| format!("a{k}")).collect();
    let mut domain = json!({"kind": "enum", "values": elems});
    if let Some(m) = measure {
        domain["measure"] = json!(m);
    }
    let rows: Vec<serde_json::Value> =
        elems.iter().zip(values).map(|(a, v)| json!([a, [[true, v], [false, 1.0 - v]]])).collect();
    let doc = json!({"sorts": {"S": domain}, "mpreds": {"R": {"kind": "ctable", "rows": rows}}});
    let i = Interpretation::from_json(&doc, &sig, MonadKind::Distribution).expect("generated interpretation");
    let body = Formula::MAtom { pred: "R".into(), args: vec![crate::syntax::Term::var("x", "S")] };
    (Arc::new(i), Formula::forall("x", "S", body))
}

pub fn quantifier_consistency(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for round in 0..200 {
        let n = rng.random_range(1..=6);
        let values: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.05) { 0.0 } else { rng.random_range(0.01..1.0) })
            .collect();
        let product: f64 = values.iter().product();
        let geometric = if values.contains(&0.0) {
            0.0
        } else {
            (values.iter().map(|v| v.ln()).sum::<f64>() / n as f64).exp()
        };
        for (measure, want) in [(None, product), (Some("mean"), geometric)] {
            let (i, f) = family_system(&values, measure);
            match eval(&f, &i, MonadKind::Distribution, Budget::exact(), round) {
                Ok(r) => {
                    let got = r.as_f64().unwrap_or(f64::NAN);
                    suite.check((got - want).abs() <= PROB_TOL, || {
                        format!("{measure:?} forall over {values:?}: {got}, oracle {want}")
                    })
                }
                Err(e) => suite.fail(e.to_string()),
            }
        }
    }
}

pub fn ltn_limits(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    let ltn = |p: f64| TruthAlgebra::new(AlgebraKind::LtnP { p }).expect("valid");
    let value = |alg: &TruthAlgebra, q: Quantifier, fam: &WeightedFamily| {
        alg.aggregate(q, fam).ok().and_then(|v| v.as_f64()).unwrap_or(f64::NAN)
    };
    for _ in 0..200 {
        let mut vals: Vec<f64> = Vec::new();
        while vals.len() < 5 {
            let v = rng.random_range(0.0..1.0);
            if vals.iter().all(|w: &f64| (w - v).abs() > 1e-6) {
                vals.push(v);
            }
        }
        let max = vals.iter().copied().fold(0.0, f64::max);
        let fam = WeightedFamily::unit(vals.iter().map(|&v| TruthValue::Prob(v)).collect());
        let gap8 = (value(&ltn(8.0), Quantifier::Exists, &fam) - max).abs();
        let gap64 = (value(&ltn(64.0), Quantifier::Exists, &fam) - max).abs();
        suite.check(gap64 < gap8 && gap64 < 0.05, || format!("{vals:?}: |exists - max| = {gap8} at p=8, {gap64} at p=64"));

        let c = rng.random_range(0.01..1.0);
        let constant = WeightedFamily::unit(vec![TruthValue::Prob(c); 5]);
        let mean = WeightedFamily::Exact(vec![(0.2, TruthValue::Prob(c)); 5]);
        let algebras = [
            (ltn(2.0), &constant),
            (ltn(64.0), &constant),
            (TruthAlgebra::new(AlgebraKind::LtnQ { q: 0.5 }).expect("valid"), &constant),
            (TruthAlgebra::new(AlgebraKind::LtnQ { q: 1.0 }).expect("valid"), &constant),
            (TruthAlgebra::product(), &mean),
        ];
        for (alg, fam) in algebras {
            for q in [Quantifier::Forall, Quantifier::Exists] {
                let got = value(&alg, q, fam);
                suite.check((got - c).abs() <= PROB_TOL, || format!("{} {q:?} of constant {c}: {got}", alg.name()));
            }
        }
    }
}

pub fn dirac_collapse(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    let opts = GenOptions { dirac: true, mpreds: false, quantifiers: true, depth: 4 };
    for round in 0..200 {
        let sys = random_system(rng, opts);
        let f = random_formula(rng, opts);
        let run = || -> Result<(EvalReport, EvalReport, EvalReport)> {
            let dist = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Distribution)?);
            let classical = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Identity)?);
            let lp = Arc::new(argmax_interpretation(&dist)?);
            Ok((
                eval(&f, &dist, MonadKind::Distribution, Budget::exact(), round)?,
                eval(&f, &classical, MonadKind::Identity, Budget::exact(), round)?,
                eval(&f, &lp, MonadKind::NonEmptySet, Budget::exact(), round)?,
            ))
        };
        match run() {
            Ok((d, c, l)) => {
                let ReportValue::Boolean(b) = c.value else {
                    suite.fail(format!("classical value {}", c.value));
                    continue;
                };
                let want = if b { 1.0 } else { 0.0 };
                suite.check(d.value == ReportValue::Real(want), || format!("{f}: dist {} vs classical {b}", d.value));
                suite.check(l.value == ReportValue::Lp3(Lp3::from_bool(b)), || {
                    format!("{f}: lp after argmax {} vs classical {b}", l.value)
                });
            }
            Err(e) => suite.fail(format!("{f}: {e}")),
        }
    }
}

pub fn argmax_idempotence(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for _ in 0..100 {
        let dirac = rng.random_bool(0.5);
        let opts = GenOptions { dirac, mpreds: true, quantifiers: false, depth: 0 };
        let sys = random_system(rng, opts);
        let run = || -> Result<bool> {
            let dist = Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Distribution)?;
            let once = argmax_interpretation(&dist)?;
            let twice = argmax_interpretation(&once)?;
            let reloaded = Interpretation::from_json(&once.to_json(), &sys.sig, MonadKind::NonEmptySet)?;
            Ok(once == twice && once == reloaded)
        };
        match run() {
            Ok(ok) => suite.check(ok, || "argmax is not idempotent".into()),
            Err(e) => suite.fail(e.to_string()),
        }
    }
}

pub fn sampler_agreement(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    const N: usize = 100_000;
    let opts = GenOptions { dirac: false, mpreds: true, quantifiers: false, depth: 3 };
    for round in 0..50u64 {
        let sys = random_system(rng, opts);
        let mut f = random_formula(rng, opts);
        if rng.random_bool(0.3) {
            // Only top-level quantifiers: nested ones are realised per draw.
            f = Formula::forall("q", "S", Formula::and(f, Formula::MAtom {
                pred: "R".into(),
                args: vec![crate::syntax::Term::var("q", "S")],
            }));
        }
        let run = || -> Result<(f64, EvalReport)> {
            let dist = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Distribution)?);
            let sampler = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Sampler)?);
            let exact = eval_sproduct(&f, &dist)?.as_f64().unwrap_or(f64::NAN);
            Ok((exact, eval(&f, &sampler, MonadKind::Sampler, Budget::samples(N), round)?))
        };
        match run() {
            Ok((exact, r)) => {
                let est = r.as_f64().unwrap_or(f64::NAN);
                let se = r.stderr.unwrap_or(0.0).max((exact * (1.0 - exact) / N as f64).sqrt());
                suite.check((est - exact).abs() <= 4.0 * se + 1e-12, || {
                    format!("{f}: estimate {est} ± {se}, exact {exact}")
                });
            }
            Err(e) => suite.fail(format!("{f}: {e}")),
        }
    }
}

pub fn wmc_equivalence(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for _ in 0..100 {
        let (sig, doc, vars) = random_network(rng, 4);
        let f = random_network_formula(rng, &vars, 3);
        let run = || -> Result<(f64, f64)> {
            let i = Arc::new(Interpretation::from_json(&doc, &sig, MonadKind::Distribution)?);
            let net = i.network().expect("vars section").vars.clone();
            Ok((wmc(&net, &i, &f)?, wmc_bruteforce(&net, &i, &f)?))
        };
        match run() {
            Ok((built, oracle)) => {
                suite.check((built - oracle).abs() <= 1e-9, || format!("{f}: binds {built}, enumeration {oracle}"))
            }
            Err(e) => suite.fail(format!("{f}: {e}")),
        }
    }
}
