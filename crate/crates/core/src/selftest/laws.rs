//! Algebra and monad law suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    lift_algebra, AlgebraKind, Lp3, Quantifier, TruthAlgebra, TruthValue, WeightedFamily,
};
use crate::effects::{unit, Computation, Distribution, MonadKind, NonEmpty, RandomKey, Sampler};
use crate::error::Result;

use super::{Suite, PROB_TOL};

/// Algebras with lattice connectives, paired with a sampler of carrier values.
fn lattice_catalog() -> Vec<TruthAlgebra> {
    let mut out = vec![
        TruthAlgebra::boolean(),
        TruthAlgebra::priest(),
        TruthAlgebra::product(),
        TruthAlgebra::sproduct(),
        TruthAlgebra::new(AlgebraKind::LtnP { p: 2.0 }).expect("valid"),
        TruthAlgebra::new(AlgebraKind::LtnQ { q: 0.75 }).expect("valid"),
    ];
    for kind in [MonadKind::NonEmptySet, MonadKind::Distribution] {
        out.push(lift_algebra(&TruthAlgebra::boolean(), kind).expect("boolean lifts"));
    }
    out
}

fn random_value(alg: &TruthAlgebra, rng: &mut ChaCha8Rng) -> TruthValue {
    use crate::algebra::Carrier;
    match alg.carrier() {
        Carrier::Boolean => TruthValue::B2(rng.random_bool(0.5)),
        Carrier::Lp3 => TruthValue::Lp3(Lp3::ALL[rng.random_range(0..3)]),
        Carrier::Prob => TruthValue::Prob(match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        }),
        Carrier::XReal => TruthValue::XReal(rng.random_range(-10.0..10.0)),
        Carrier::BoolSampler => TruthValue::BoolSampler(Sampler::constant(rng.random_bool(0.5))),
    }
}

fn close(a: &TruthValue, b: &TruthValue) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => (x - y).abs() <= PROB_TOL || x == y,
        _ => a == b,
    }
}

pub fn monoid(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for alg in lattice_catalog() {
        for _ in 0..1000 {
            let [x, y, z] = [0; 3].map(|_| random_value(&alg, rng));
            let run = || -> Result<Vec<(&str, TruthValue, TruthValue)>> {
                Ok(vec![
                    ("conj assoc", alg.conj(&alg.conj(&x, &y)?, &z)?, alg.conj(&x, &alg.conj(&y, &z)?)?),
                    ("disj assoc", alg.disj(&alg.disj(&x, &y)?, &z)?, alg.disj(&x, &alg.disj(&y, &z)?)?),
                    ("conj unit", alg.conj(&x, &alg.top())?, x.clone()),
                    ("conj unit left", alg.conj(&alg.top(), &x)?, x.clone()),
                    ("disj unit", alg.disj(&x, &alg.bot())?, x.clone()),
                    ("disj unit left", alg.disj(&alg.bot(), &x)?, x.clone()),
                ])
            };
            match run() {
                Ok(checks) => {
                    for (law, l, r) in checks {
                        suite.check(close(&l, &r), || format!("{} {law}: {l} != {r} at ({x}, {y}, {z})", alg.name()));
                    }
                }
                Err(e) => suite.fail(format!("{}: {e}", alg.name())),
            }
        }
    }
}

pub fn classical_limit(_: &mut ChaCha8Rng, suite: &mut Suite) {
    let mut algebras = lattice_catalog();
    algebras.push(TruthAlgebra::new(AlgebraKind::StlR { r: 3.0 }).expect("valid"));
    algebras.push(lift_algebra(&TruthAlgebra::boolean(), MonadKind::Sampler).expect("lifts"));
    for alg in algebras {
        let as_bool = |v: &TruthValue| -> Option<bool> {
            if *v == alg.top() {
                Some(true)
            } else if *v == alg.bot() {
                Some(false)
            } else {
                None
            }
        };
        for a in [false, true] {
            let x = alg.from_bool(a);
            let got = alg.neg(&x).ok().and_then(|v| as_bool(&v));
            suite.check(got == Some(!a), || format!("{} neg({a}) = {got:?}", alg.name()));
            for b in [false, true] {
                let y = alg.from_bool(b);
                for (op, want, got) in [
                    ("conj", a && b, alg.conj(&x, &y)),
                    ("disj", a || b, alg.disj(&x, &y)),
                    ("implies", !a || b, alg.implies(&x, &y)),
                ] {
                    let got = got.ok().and_then(|v| as_bool(&v));
                    suite.check(got == Some(want), || format!("{} {op}({a}, {b}) = {got:?}", alg.name()));
                }
            }
        }
    }
}

/// Product, S-product and the LTN algebras with an involutive negation for
/// the duality check (product's own negation is residual).
fn aggregating_catalog() -> Vec<TruthAlgebra> {
    vec![
        TruthAlgebra::product(),
        TruthAlgebra::sproduct(),
        TruthAlgebra::new(AlgebraKind::LtnP { p: 1.0 }).expect("valid"),
        TruthAlgebra::new(AlgebraKind::LtnP { p: 3.0 }).expect("valid"),
        TruthAlgebra::new(AlgebraKind::LtnQ { q: 0.5 }).expect("valid"),
        TruthAlgebra::new(AlgebraKind::LtnQ { q: 1.0 }).expect("valid"),
    ]
}

fn random_family(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let unit_weights = rng.random_bool(0.5);
    let n = rng.random_range(1..=6);
    (0..n)
        .map(|_| {
            let w = if unit_weights { 1.0 } else { rng.random_range(0.0..2.0) };
            (w, rng.random_range(0.01..0.99))
        })
        .collect()
}

fn exact(fam: &[(f64, f64)]) -> WeightedFamily {
    WeightedFamily::Exact(fam.iter().map(|&(w, v)| (w, TruthValue::Prob(v))).collect())
}

fn agg(alg: &TruthAlgebra, q: Quantifier, fam: &[(f64, f64)]) -> Result<f64> {
    Ok(alg.aggregate(q, &exact(fam))?.as_f64().unwrap_or(f64::NAN))
}

pub fn duality(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for alg in aggregating_catalog() {
        for _ in 0..200 {
            let mut fam = random_family(rng);
            if fam.iter().all(|(w, _)| *w == 0.0) {
                fam[0].0 = 1.0;
            }
            let negated: Vec<(f64, f64)> = fam.iter().map(|&(w, v)| (w, 1.0 - v)).collect();
            match (agg(&alg, Quantifier::Exists, &fam), agg(&alg, Quantifier::Forall, &negated)) {
                (Ok(e), Ok(a)) => suite.check((e - (1.0 - a)).abs() <= PROB_TOL, || {
                    format!("{}: exists {e} != 1 - forall(neg) {}", alg.name(), 1.0 - a)
                }),
                (Err(e), _) | (_, Err(e)) => suite.fail(format!("{}: {e}", alg.name())),
            }
        }
    }
}

/// `A^r` and `O^r` are softmin-weighted means and can decrease when a
/// member increases, so the STL aggregators are not part of this suite.
pub fn monotonicity(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for alg in aggregating_catalog() {
        for _ in 0..200 {
            let fam = random_family(rng);
            let fam = if fam.iter().all(|(w, _)| *w == 0.0) { vec![(1.0, 0.5)] } else { fam };
            let bumped: Vec<(f64, f64)> = fam
                .iter()
                .map(|&(w, v)| (w, if rng.random_bool(0.5) { v + rng.random_range(0.0..(1.0 - v)) } else { v }))
                .collect();
            let to_fam = |f: &[(f64, f64)]| {
                WeightedFamily::Exact(
                    f.iter()
                        .map(|&(w, v)| (w, TruthValue::Prob(v)))
                        .collect(),
                )
            };
            for q in [Quantifier::Forall, Quantifier::Exists] {
                let lo = alg.aggregate(q, &to_fam(&fam)).map(|v| v.as_f64().unwrap_or(f64::NAN));
                let hi = alg.aggregate(q, &to_fam(&bumped)).map(|v| v.as_f64().unwrap_or(f64::NAN));
                match (lo, hi) {
                    (Ok(lo), Ok(hi)) => suite.check(hi >= lo - PROB_TOL, || {
                        format!("{} {q:?} decreased from {lo} to {hi}", alg.name())
                    }),
                    (Err(e), _) | (_, Err(e)) => suite.fail(format!("{}: {e}", alg.name())),
                }
            }
        }
    }
}

pub fn lifted_closed_forms(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    let lifted = lift_algebra(&TruthAlgebra::boolean(), MonadKind::Distribution).expect("lifts");
    for _ in 0..1000 {
        let (p, q): (f64, f64) = (rng.random(), rng.random());
        let (x, y) = (TruthValue::Prob(p), TruthValue::Prob(q));
        let get = |v: Result<TruthValue>| v.ok().and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        for (op, got, want) in [
            ("conj", get(lifted.conj(&x, &y)), p * q),
            ("disj", get(lifted.disj(&x, &y)), p + q - p * q),
            ("neg", get(lifted.neg(&x)), 1.0 - p),
            ("implies", get(lifted.implies(&x, &y)), 1.0 - p + p * q),
        ] {
            suite.check((got - want).abs() <= PROB_TOL, || format!("{op}({p}, {q}) = {got}, closed form {want}"));
        }
    }
}

pub fn stl_convergence(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for _ in 0..200 {
        let n = rng.random_range(2..=6);
        let mut vals: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        let min = vals[0];
        let fam = WeightedFamily::unit(vals.iter().map(|&v| TruthValue::XReal(v)).collect());
        let gaps: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&r| {
                let alg = TruthAlgebra::new(AlgebraKind::StlR { r }).expect("valid");
                alg.aggregate(Quantifier::Forall, &fam)
                    .ok()
                    .and_then(|v| v.as_f64())
                    .map_or(f64::NAN, |a| (a - min).abs())
            })
            .collect();
        let ok = vals.len() == 1 || (gaps[1] <= gaps[0] && gaps[2] <= gaps[1]);
        suite.check(ok, || format!("|A^r - min| not decreasing for {vals:?}: {gaps:?}"));
    }
}

fn random_comp(rng: &mut ChaCha8Rng, kind: MonadKind) -> Computation<i64> {
    match kind {
        MonadKind::Identity => Computation::Pure(rng.random_range(0..3)),
        MonadKind::NonEmptySet => {
            let items: Vec<i64> = (0..3).filter(|_| rng.random_bool(0.5)).collect();
            Computation::Set(NonEmpty::new(items).unwrap_or_else(|| NonEmpty::singleton(rng.random_range(0..3))))
        }
        MonadKind::Distribution | MonadKind::Sampler => {
            let size = rng.random_range(1..=3);
            let w: Vec<f64> = (0..size).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            let d = Distribution::new(w.iter().enumerate().map(|(k, p)| (k as i64, p / total)).collect())
                .expect("normalised");
            if kind == MonadKind::Sampler {
                Computation::Sampler(Sampler::from_distribution(d))
            } else {
                Computation::Dist(d)
            }
        }
    }
}

fn random_kleisli(rng: &mut ChaCha8Rng, kind: MonadKind) -> impl Fn(i64) -> Result<Computation<i64>> + Clone + Send + Sync + 'static {
    let table: Vec<Computation<i64>> = (0..3).map(|_| random_comp(rng, kind)).collect();
    move |x: i64| Ok(table[x as usize].clone())
}

fn same(a: &Computation<i64>, b: &Computation<i64>) -> bool {
    match (a, b) {
        (Computation::Dist(x), Computation::Dist(y)) => x.approx_eq(y, PROB_TOL),
        _ => a == b,
    }
}

pub fn monad_laws(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    for kind in [MonadKind::Identity, MonadKind::NonEmptySet, MonadKind::Distribution] {
        for _ in 0..500 {
            let x = rng.random_range(0..3);
            let c = random_comp(rng, kind);
            let k = random_kleisli(rng, kind);
            let h = random_kleisli(rng, kind);
            let checks = (|| -> Result<[(&str, Computation<i64>, Computation<i64>); 3]> {
                let left = (unit(kind, x).bind(k.clone())?, k(x)?);
                let right = (c.clone().bind(move |y| Ok(unit(kind, y)))?, c.clone());
                let (k2, h2) = (k.clone(), h.clone());
                let assoc = (
                    c.clone().bind(k.clone())?.bind(h.clone())?,
                    c.clone().bind(move |y| k2(y)?.bind(h2.clone()))?,
                );
                Ok([("left unit", left.0, left.1), ("right unit", right.0, right.1), ("assoc", assoc.0, assoc.1)])
            })();
            match checks {
                Ok(checks) => {
                    for (law, l, r) in checks {
                        suite.check(same(&l, &r), || format!("{kind} {law}: {l:?} != {r:?}"));
                    }
                }
                Err(e) => suite.fail(format!("{kind}: {e}")),
            }
        }
    }
}

/// Empirical distribution of `n` draws over `{0, 1, 2}`.
fn histogram(c: &Computation<i64>, n: usize, key: &RandomKey) -> Result<[f64; 3]> {
    let mut counts = [0usize; 3];
    for i in 0..n as u64 {
        counts[c.sample(&key.child(i))? as usize] += 1;
    }
    Ok(counts.map(|k| k as f64 / n as f64))
}

fn tv(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Sampler laws hold in distribution: both sides are sampled under
/// unrelated seeds and compared by total variation.
pub fn sampler_laws(rng: &mut ChaCha8Rng, suite: &mut Suite) {
    const N: usize = 100_000;
    let kind = MonadKind::Sampler;
    for round in 0..3u64 {
        let x = rng.random_range(0..3);
        let c = random_comp(rng, kind);
        let k = random_kleisli(rng, kind);
        let h = random_kleisli(rng, kind);
        let run = || -> Result<Vec<(&str, f64)>> {
            let (ka, kb) = (RandomKey::new(1000 + round), RandomKey::new(2000 + round));
            let left = (unit(kind, x).bind(k.clone())?, k(x)?);
            let right = (c.clone().bind(move |y| Ok(unit(kind, y)))?, c.clone());
            let (k2, h2) = (k.clone(), h.clone());
            let assoc = (
                c.clone().bind(k.clone())?.bind(h.clone())?,
                c.clone().bind(move |y| k2(y)?.bind(h2.clone()))?,
            );
            let mut out = Vec::new();
            for (law, (l, r)) in [("left unit", left), ("right unit", right), ("assoc", assoc)] {
                out.push((law, tv(&histogram(&l, N, &ka)?, &histogram(&r, N, &kb)?)));
            }
            Ok(out)
        };
        match run() {
            Ok(dists) => {
                for (law, d) in dists {
                    suite.check(d <= 0.02, || format!("sampler {law}: total variation {d}"));
                }
            }
            Err(e) => suite.fail(format!("sampler: {e}")),
        }
    }
}
