//! Random small systems: signatures, interpretation documents and formulas.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde_json::{json, Value as Json};

use crate::syntax::{Formula, Signature, Term};

/// Shape of generated systems.
#[derive(Debug, Clone, Copy)]
pub struct GenOptions {
    /// Every table row is a point mass.
    pub dirac: bool,
    /// Include the computational predicate `R`.
    pub mpreds: bool,
    /// Allow quantifiers anywhere in the formula.
    pub quantifiers: bool,
    pub depth: usize,
}

/// A generated signature with an interpretation document for it.
#[derive(Debug, Clone)]
pub struct System {
    pub sig: Signature,
    pub doc: Json,
}

/// Sorts `S` and `V` with `c: S`, `f: S -> S`, `g: S -> V`, predicates
/// `P(V)`, `Q(S, V)`, computational `m1: S -> V`, `m2: V -> V` and
/// optionally the computational predicate `R(S)`.
pub fn random_system<R: Rng>(rng: &mut R, opts: GenOptions) -> System {
    let mut sig_doc = json!({
        "sorts": ["S", "V"],
        "funcs": {
            "c": {"args": [], "result": "S"},
            "f": {"args": ["S"], "result": "S"},
            "g": {"args": ["S"], "result": "V"}
        },
        "preds": {"P": {"args": ["V"]}, "Q": {"args": ["S", "V"]}},
        "mfuncs": {
            "m1": {"args": ["S"], "result": "V"},
            "m2": {"args": ["V"], "result": "V"}
        }
    });
    if opts.mpreds {
        sig_doc["mpreds"] = json!({"R": {"args": ["S"]}});
    }
    let sig: Signature = serde_json::from_value(sig_doc).expect("generated signature");

    let s: Vec<String> = (0..rng.random_range(2..=3)).map(|k| format!("s{k}")).collect();
    let v: Vec<String> = (0..rng.random_range(2..=3)).map(|k| format!("v{k}")).collect();
    let pick = |rng: &mut R, xs: &[String]| xs.choose(rng).expect("non-empty").clone();
    let f_rows: Vec<Json> = s.iter().map(|a| json!([a, pick(rng, &s)])).collect();
    let g_rows: Vec<Json> = s.iter().map(|a| json!([a, pick(rng, &v)])).collect();
    let p_rows: Vec<Json> = v.iter().map(|b| json!([b, rng.random_bool(0.5)])).collect();
    let mut q_rows = Vec::new();
    for a in &s {
        for b in &v {
            q_rows.push(json!([a, b, rng.random_bool(0.5)]));
        }
    }
    let m1_rows: Vec<Json> = s.iter().map(|a| json!([a, outcome(rng, &v, opts.dirac)])).collect();
    let m2_rows: Vec<Json> = v.iter().map(|b| json!([b, outcome(rng, &v, opts.dirac)])).collect();
    let mut doc = json!({
        "sorts": {"S": s, "V": v},
        "funcs": {
            "c": {"kind": "table", "rows": [[pick(rng, &s)]]},
            "f": {"kind": "table", "rows": f_rows},
            "g": {"kind": "table", "rows": g_rows}
        },
        "preds": {
            "P": {"kind": "table", "rows": p_rows},
            "Q": {"kind": "table", "rows": q_rows}
        },
        "mfuncs": {
            "m1": {"kind": "ctable", "rows": m1_rows},
            "m2": {"kind": "ctable", "rows": m2_rows}
        }
    });
    if opts.mpreds {
        let bools = ["false".to_string(), "true".to_string()];
        let r_rows: Vec<Json> = s
            .iter()
            .map(|a| {
                let row = outcome(rng, &bools, opts.dirac);
                let row: Vec<Json> = row
                    .as_array()
                    .expect("pairs")
                    .iter()
                    .map(|pair| json!([pair[0] == "true", pair[1]]))
                    .collect();
                json!([a, row])
            })
            .collect();
        doc["mpreds"] = json!({"R": {"kind": "ctable", "rows": r_rows}});
    }
    System { sig, doc }
}

/// A random distribution over `support` as `[[value, p], ...]`.
pub fn outcome<R: Rng>(rng: &mut R, support: &[String], dirac: bool) -> Json {
    if dirac {
        return json!([[support.choose(rng).expect("non-empty"), 1.0]]);
    }
    let weights: Vec<f64> = support.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    Json::Array(support.iter().zip(&weights).map(|(s, w)| json!([s, w / total])).collect())
}

/// A closed formula over [`random_system`]'s signature.
pub fn random_formula<R: Rng>(rng: &mut R, opts: GenOptions) -> Formula {
    let mut g = FormulaGen { rng, opts, fresh: 0 };
    g.formula(opts.depth, &mut Vec::new())
}

struct FormulaGen<'r, R> {
    rng: &'r mut R,
    opts: GenOptions,
    fresh: usize,
}

impl<R: Rng> FormulaGen<'_, R> {
    fn var(&mut self) -> String {
        self.fresh += 1;
        format!("x{}", self.fresh)
    }

    fn formula(&mut self, depth: usize, scope: &mut Vec<(String, &'static str)>) -> Formula {
        if depth == 0 {
            return self.atom(scope);
        }
        let choices = if self.opts.quantifiers { 9 } else { 7 };
        match self.rng.random_range(0..choices) {
            0 => self.atom(scope),
            1 => Formula::not(self.formula(depth - 1, scope)),
            2 => Formula::and(self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            3 => Formula::or(self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            4 => Formula::implies(self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            5 => {
                let arg = self.s_term(scope, 1);
                self.bind("m1", arg, depth, scope)
            }
            6 => {
                let arg = self.v_term(scope);
                self.bind("m2", arg, depth, scope)
            }
            k => {
                let x = self.var();
                scope.push((x.clone(), "S"));
                let body = self.formula(depth - 1, scope);
                scope.pop();
                if k == 7 {
                    Formula::forall(&x, "S", body)
                } else {
                    Formula::exists(&x, "S", body)
                }
            }
        }
    }

    fn bind(&mut self, m: &str, arg: Term, depth: usize, scope: &mut Vec<(String, &'static str)>) -> Formula {
        let x = self.var();
        scope.push((x.clone(), "V"));
        let body = self.formula(depth - 1, scope);
        scope.pop();
        Formula::bind(&x, m, vec![arg], body)
    }

    fn atom(&mut self, scope: &[(String, &'static str)]) -> Formula {
        let n = if self.opts.mpreds { 6 } else { 5 };
        match self.rng.random_range(0..n) {
            0 => {
                if self.rng.random_bool(0.5) {
                    Formula::Top
                } else {
                    Formula::Bot
                }
            }
            1 => Formula::atom("P", vec![self.v_term(scope)]),
            2 => {
                let s = self.s_term(scope, 1);
                Formula::atom("Q", vec![s, self.v_term(scope)])
            }
            3 | 4 => {
                let a = self.v_term(scope);
                Formula::atom("eq", vec![a, self.v_term(scope)])
            }
            _ => Formula::MAtom { pred: "R".into(), args: vec![self.s_term(scope, 1)] },
        }
    }

    fn s_term(&mut self, scope: &[(String, &'static str)], depth: usize) -> Term {
        let vars: Vec<&String> = scope.iter().filter(|(_, s)| *s == "S").map(|(n, _)| n).collect();
        match self.rng.random_range(0..3) {
            0 if !vars.is_empty() => Term::var(vars.choose(self.rng).expect("non-empty"), "S"),
            1 if depth > 0 => apply("f", vec![self.s_term(scope, depth - 1)], "S"),
            _ => apply("c", Vec::new(), "S"),
        }
    }

    fn v_term(&mut self, scope: &[(String, &'static str)]) -> Term {
        let vars: Vec<&String> = scope.iter().filter(|(_, s)| *s == "V").map(|(n, _)| n).collect();
        if !vars.is_empty() && self.rng.random_bool(0.7) {
            Term::var(vars.choose(self.rng).expect("non-empty"), "V")
        } else {
            apply("g", vec![self.s_term(scope, 1)], "V")
        }
    }
}

fn apply(symbol: &str, args: Vec<Term>, sort: &str) -> Term {
    Term::Apply { symbol: symbol.into(), args, sort: sort.into() }
}

/// A random propositional formula over `p0 .. p{atoms-1}`.
pub fn random_propositional<R: Rng>(rng: &mut R, atoms: usize, depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::Prop(format!("p{}", rng.random_range(0..atoms)).into()),
        };
    }
    let sub = |rng: &mut R| random_propositional(rng, atoms, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}

/// A random Bayesian network document over integer sorts `K2`, `K3`, with
/// variables in topological order and at most two parents each.
pub fn random_network<R: Rng>(rng: &mut R, max_vars: usize) -> (Signature, Json, Vec<(String, usize)>) {
    let sig: Signature =
        serde_json::from_value(json!({"sorts": ["K2", "K3"]})).expect("generated signature");
    let n = rng.random_range(1..=max_vars);
    let mut vars: Vec<(String, usize)> = Vec::new();
    let mut entries = Vec::new();
    for j in 0..n {
        let size = rng.random_range(2..=3);
        let name = format!("x{j}");
        let mut parents: Vec<usize> = (0..j).filter(|_| rng.random_bool(0.5)).collect();
        parents.truncate(2);
        let support: Vec<String> = (0..size).map(|k| k.to_string()).collect();
        let mut rows = Vec::new();
        let mut idx = vec![0usize; parents.len()];
        loop {
            let mut row: Vec<Json> = idx.iter().map(|&k| json!(k)).collect();
            let dist = outcome(rng, &support, false);
            let dist: Vec<Json> = dist
                .as_array()
                .expect("pairs")
                .iter()
                .map(|pair| json!([pair[0].as_str().expect("label").parse::<i64>().expect("int"), pair[1]]))
                .collect();
            row.push(Json::Array(dist));
            rows.push(Json::Array(row));
            let mut pos = parents.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < vars[parents[pos]].1 {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&k| k == 0) {
                break;
            }
        }
        entries.push(json!({
            "name": name,
            "sort": if size == 2 { "K2" } else { "K3" },
            "parents": parents.iter().map(|&p| vars[p].0.clone()).collect::<Vec<_>>(),
            "rows": rows
        }));
        vars.push((name, size));
    }
    let doc = json!({
        "sorts": {"K2": [0, 1], "K3": [0, 1, 2]},
        "vars": entries
    });
    (sig, doc, vars)
}

/// A random propositional formula over atoms `eq(x, k)` and `lt(x, k)`.
pub fn random_network_formula<R: Rng>(rng: &mut R, vars: &[(String, usize)], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        let (name, size) = vars.choose(rng).expect("non-empty");
        let sort = if *size == 2 { "K2" } else { "K3" };
        let k = rng.random_range(0..*size as i64);
        let pred = if rng.random_bool(0.7) { "eq" } else { "lt" };
        return Formula::atom(pred, vec![Term::var(name, sort), Term::Literal(crate::syntax::Number::Int(k))]);
    }
    let sub = |rng: &mut R| random_network_formula(rng, vars, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::implies(sub(rng), sub(rng)),
    }
}
