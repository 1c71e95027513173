//! Property tests for the algebra, monad, syntax and evaluation invariants.

use std::sync::Arc;

use nesy_core::algebra::{
    and_r, lift_algebra, AlgebraKind, Lp3, Quantifier, TruthAlgebra, TruthValue, WeightedFamily,
};
use nesy_core::effects::{count_true, unit, Computation, Distribution, MonadKind, RandomKey, Sampler};
use nesy_core::model::{Interpretation, Value};
use nesy_core::selftest::gen::{random_formula, random_system, GenOptions};
use nesy_core::semantics::{evaluate_sentence, Budget, Evaluator, Framework, Valuation};
use nesy_core::syntax::{parse_formula, Formula};
use nesy_core::transforms::argmax_interpretation;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn prob_algebras() -> Vec<TruthAlgebra> {
    vec![
        TruthAlgebra::product(),
        TruthAlgebra::sproduct(),
        TruthAlgebra::new(AlgebraKind::LtnP { p: 2.0 }).unwrap(),
        TruthAlgebra::new(AlgebraKind::LtnQ { q: 0.5 }).unwrap(),
    ]
}

fn prob(x: &TruthValue) -> f64 {
    x.as_f64().unwrap()
}

fn unit_value() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64]
}

fn family() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.01..2.0f64, 0.01..0.99f64), 1..7)
}

fn exact(fam: &[(f64, f64)]) -> WeightedFamily {
    WeightedFamily::Exact(fam.iter().map(|&(w, v)| (w, TruthValue::Prob(v))).collect())
}

fn distribution() -> impl Strategy<Value = Distribution<i64>> {
    prop::collection::vec(0.05..1.0f64, 3).prop_map(|w| {
        let total: f64 = w.iter().sum();
        Distribution::new(w.iter().enumerate().map(|(i, x)| (i as i64, x / total)).collect()).unwrap()
    })
}

fn kleisli(table: Vec<Distribution<i64>>) -> impl Fn(i64) -> nesy_core::Result<Computation<i64>> + Clone + Send + Sync + 'static {
    move |x| Ok(Computation::Dist(table[x as usize].clone()))
}

fn system(seed: u64, opts: GenOptions) -> (nesy_core::selftest::gen::System, Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = random_system(&mut rng, opts);
    let f = random_formula(&mut rng, opts);
    (sys, f)
}

proptest! {
    #[test]
    fn prob_monoid_laws(x in unit_value(), y in unit_value(), z in unit_value()) {
        let (x, y, z) = (TruthValue::Prob(x), TruthValue::Prob(y), TruthValue::Prob(z));
        for alg in prob_algebras() {
            let l = alg.conj(&alg.conj(&x, &y).unwrap(), &z).unwrap();
            let r = alg.conj(&x, &alg.conj(&y, &z).unwrap()).unwrap();
            prop_assert!((prob(&l) - prob(&r)).abs() <= TOL);
            let l = alg.disj(&alg.disj(&x, &y).unwrap(), &z).unwrap();
            let r = alg.disj(&x, &alg.disj(&y, &z).unwrap()).unwrap();
            prop_assert!((prob(&l) - prob(&r)).abs() <= TOL);
            prop_assert!((prob(&alg.conj(&x, &alg.top()).unwrap()) - prob(&x)).abs() <= TOL);
            prop_assert!((prob(&alg.disj(&x, &alg.bot()).unwrap()) - prob(&x)).abs() <= TOL);
        }
    }

    #[test]
    fn priest_monoid_laws(i in 0..3usize, j in 0..3usize, k in 0..3usize) {
        let alg = TruthAlgebra::priest();
        let [x, y, z] = [i, j, k].map(|n| TruthValue::Lp3(Lp3::ALL[n]));
        prop_assert_eq!(alg.conj(&alg.conj(&x, &y).unwrap(), &z).unwrap(), alg.conj(&x, &alg.conj(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(alg.disj(&alg.disj(&x, &y).unwrap(), &z).unwrap(), alg.disj(&x, &alg.disj(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(alg.conj(&x, &alg.top()).unwrap(), x.clone());
        prop_assert_eq!(alg.disj(&x, &alg.bot()).unwrap(), x);
    }

    #[test]
    fn duality(fam in family()) {
        for alg in prob_algebras() {
            let negated: Vec<(f64, f64)> = fam.iter().map(|&(w, v)| (w, 1.0 - v)).collect();
            let e = prob(&alg.aggregate(Quantifier::Exists, &exact(&fam)).unwrap());
            let a = prob(&alg.aggregate(Quantifier::Forall, &exact(&negated)).unwrap());
            prop_assert!((e - (1.0 - a)).abs() <= TOL, "{}: {} vs {}", alg.name(), e, 1.0 - a);
        }
    }

    #[test]
    fn aggregators_are_monotone(fam in family(), bumps in prop::collection::vec(0.0..1.0f64, 6)) {
        let bumped: Vec<(f64, f64)> = fam.iter().zip(&bumps).map(|(&(w, v), b)| (w, v + b * (1.0 - v))).collect();
        for alg in prob_algebras() {
            for q in [Quantifier::Forall, Quantifier::Exists] {
                let lo = prob(&alg.aggregate(q, &exact(&fam)).unwrap());
                let hi = prob(&alg.aggregate(q, &exact(&bumped)).unwrap());
                prop_assert!(hi >= lo - TOL, "{} {:?}: {} -> {}", alg.name(), q, lo, hi);
            }
        }
    }

    #[test]
    fn zero_absorption(fam in family(), at in 0..6usize) {
        let mut fam = fam;
        let at = at % fam.len();
        fam[at].1 = 0.0;
        let v = prob(&TruthAlgebra::product().aggregate(Quantifier::Forall, &exact(&fam)).unwrap());
        prop_assert_eq!(v, 0.0);
    }

    #[test]
    fn constant_families_are_fixed_points(c in 0.01..1.0f64, n in 1..8usize) {
        let mean = WeightedFamily::Exact(vec![(1.0 / n as f64, TruthValue::Prob(c)); n]);
        let v = prob(&TruthAlgebra::product().aggregate(Quantifier::Forall, &mean).unwrap());
        prop_assert!((v - c).abs() <= TOL);
        let units = WeightedFamily::unit(vec![TruthValue::Prob(c); n]);
        for kind in [AlgebraKind::LtnP { p: 3.0 }, AlgebraKind::LtnQ { q: 0.5 }] {
            let alg = TruthAlgebra::new(kind).unwrap();
            for q in [Quantifier::Forall, Quantifier::Exists] {
                prop_assert!((prob(&alg.aggregate(q, &units).unwrap()) - c).abs() <= TOL);
            }
        }
    }

    #[test]
    fn lifted_closed_forms(p in unit_value(), q in unit_value()) {
        let lifted = lift_algebra(&TruthAlgebra::boolean(), MonadKind::Distribution).unwrap();
        let (x, y) = (TruthValue::Prob(p), TruthValue::Prob(q));
        prop_assert!((prob(&lifted.conj(&x, &y).unwrap()) - p * q).abs() <= TOL);
        prop_assert!((prob(&lifted.disj(&x, &y).unwrap()) - (p + q - p * q)).abs() <= TOL);
        prop_assert!((prob(&lifted.neg(&x).unwrap()) - (1.0 - p)).abs() <= TOL);
        prop_assert!((prob(&lifted.implies(&x, &y).unwrap()) - (1.0 - p + p * q)).abs() <= TOL);
    }

    #[test]
    fn stl_gap_shrinks(vals in prop::collection::btree_set(-500i32..500, 2..6)) {
        let vals: Vec<f64> = vals.into_iter().map(|v| v as f64 / 100.0).collect();
        let min = vals[0];
        let fam: Vec<(f64, f64)> = vals.iter().map(|&v| (1.0, v)).collect();
        let gaps: Vec<f64> = [1.0, 10.0, 100.0].iter().map(|&r| (and_r(r, &fam) - min).abs()).collect();
        prop_assert!(gaps[1] <= gaps[0] && gaps[2] <= gaps[1], "{:?}", gaps);
    }

    #[test]
    fn dist_monad_laws(x in 0..3i64, c in distribution(), k in prop::collection::vec(distribution(), 3), h in prop::collection::vec(distribution(), 3)) {
        let (k, h) = (kleisli(k), kleisli(h));
        let c = Computation::Dist(c);
        let same = |a: &Computation<i64>, b: &Computation<i64>| match (a, b) {
            (Computation::Dist(a), Computation::Dist(b)) => a.approx_eq(b, TOL),
            _ => false,
        };
        prop_assert!(same(&unit(MonadKind::Distribution, x).bind(k.clone()).unwrap(), &k(x).unwrap()));
        prop_assert!(same(&c.clone().bind(|y| Ok(unit(MonadKind::Distribution, y))).unwrap(), &c));
        let (k2, h2) = (k.clone(), h.clone());
        let left = c.clone().bind(k).unwrap().bind(h).unwrap();
        let right = c.bind(move |y| k2(y)?.bind(h2.clone())).unwrap();
        prop_assert!(same(&left, &right));
        if let Computation::Dist(d) = left {
            prop_assert!((d.total() - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn sampler_realisation_is_deterministic(p in 0.0..1.0f64, seed in any::<u64>()) {
        let s = Sampler::bernoulli(p);
        let key = RandomKey::new(seed);
        prop_assert_eq!(count_true(&s, 500, &key).unwrap(), count_true(&s, 500, &key).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pretty_print_reparses(seed in any::<u64>()) {
        let opts = GenOptions { dirac: false, mpreds: true, quantifiers: true, depth: 4 };
        let (sys, f) = system(seed, opts);
        let printed = f.to_string();
        let back = parse_formula(&printed, &sys.sig).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn valuation_irrelevance(seed in any::<u64>(), extra in 0..3usize) {
        let opts = GenOptions { dirac: false, mpreds: true, quantifiers: true, depth: 3 };
        let (sys, f) = system(seed, opts);
        let i = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Distribution).unwrap());
        let fw = Framework::new(MonadKind::Distribution, None).unwrap();
        let closed = evaluate_sentence(&f, &fw, &i, Budget::exact(), 0).unwrap();
        let ev = Evaluator::new(fw, i, Budget::exact()).unwrap();
        let nu: Valuation = (0..extra).map(|k| (format!("unused{k}"), Value::sym("s0"))).collect();
        let open = ev.formula(&f, &nu, &RandomKey::new(0).child(0)).unwrap();
        prop_assert_eq!(closed.as_f64(), open.as_f64());
    }

    #[test]
    fn argmax_on_diracs_matches_classical(seed in any::<u64>()) {
        let opts = GenOptions { dirac: true, mpreds: false, quantifiers: true, depth: 3 };
        let (sys, f) = system(seed, opts);
        let dist = Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Distribution).unwrap();
        let lp = Arc::new(argmax_interpretation(&dist).unwrap());
        let classical = Arc::new(Interpretation::from_json(&sys.doc, &sys.sig, MonadKind::Identity).unwrap());
        let lp_value = evaluate_sentence(&f, &Framework::new(MonadKind::NonEmptySet, None).unwrap(), &lp, Budget::exact(), 0).unwrap();
        let b = evaluate_sentence(&f, &Framework::new(MonadKind::Identity, None).unwrap(), &classical, Budget::exact(), 0).unwrap();
        prop_assert_eq!(lp_value.value.to_string(), if b.value.to_string() == "true" { "T" } else { "F" });
    }
}
