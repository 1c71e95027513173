use std::collections::BTreeMap;

use serde_json::{json, Map, Value as Json};

use crate::effects::{Computation, Distribution, MonadKind, NonEmpty, RandomKey, Sampler};
use crate::error::{Error, Result};
use crate::syntax::{FuncDecl, Signature, COMPARISONS};

use super::builtins::{check_arity, Builtin, Stochastic};
use super::domain::{Domain, DomainFamily};
use super::network::{Network, NetworkVar};
use super::value::Value;

/// Implementation of an ordinary function or predicate symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncImpl {
    Table { rows: BTreeMap<Vec<Value>, Value>, default: Option<Value> },
    Builtin(Builtin),
}

/// One row of a conditional table.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Dist(Distribution<Value>),
    /// Possible outcomes without probabilities (non-deterministic framework).
    Set(NonEmpty<Value>),
}

/// Implementation of a computational function or predicate symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum MFuncImpl {
    CTable(BTreeMap<Vec<Value>, Outcome>),
    Builtin(Stochastic),
}

/// Domains for sorts plus implementations for every symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpretation {
    pub(crate) signature: Signature,
    pub(crate) kind: MonadKind,
    pub(crate) sorts: BTreeMap<String, Domain>,
    pub(crate) funcs: BTreeMap<String, FuncImpl>,
    pub(crate) preds: BTreeMap<String, FuncImpl>,
    pub(crate) mfuncs: BTreeMap<String, MFuncImpl>,
    pub(crate) mpreds: BTreeMap<String, MFuncImpl>,
    /// Declarations of computational symbols not in the signature, such as
    /// the tables installed by a network section.
    pub(crate) extra_mfuncs: BTreeMap<String, FuncDecl>,
    pub(crate) network: Option<Network>,
}

const TOP_LEVEL: [&str; 6] = ["sorts", "funcs", "preds", "mfuncs", "mpreds", "vars"];

/// Parses an interpretation document for `sig` under the given monad.
pub fn load_interpretation(doc: &str, sig: &Signature, kind: MonadKind) -> Result<Interpretation> {
    let json: Json = serde_json::from_str(doc).map_err(|e| Error::Schema(format!("interpretation: {e}")))?;
    Interpretation::from_json(&json, sig, kind)
}

impl Interpretation {
    pub fn from_json(doc: &Json, sig: &Signature, kind: MonadKind) -> Result<Self> {
        let obj = doc.as_object().ok_or_else(|| Error::Schema("interpretation must be an object".into()))?;
        if let Some(key) = obj.keys().find(|k| !TOP_LEVEL.contains(&k.as_str())) {
            return Err(Error::Schema(format!("unknown top-level key `{key}`")));
        }
        let section = |key: &str| -> Result<Map<String, Json>> {
            match obj.get(key) {
                None => Ok(Map::new()),
                Some(Json::Object(m)) => Ok(m.clone()),
                Some(_) => Err(Error::Schema(format!("`{key}` must be an object"))),
            }
        };

        let mut interp = Interpretation {
            signature: sig.clone(),
            kind,
            sorts: BTreeMap::new(),
            funcs: BTreeMap::new(),
            preds: BTreeMap::new(),
            mfuncs: BTreeMap::new(),
            mpreds: BTreeMap::new(),
            extra_mfuncs: BTreeMap::new(),
            network: None,
        };

        for (sort, spec) in section("sorts")? {
            if !sig.sorts.contains(&sort) {
                return Err(Error::Schema(format!("domain given for undeclared sort `{sort}`")));
            }
            let domain = Domain::from_json(&sort, &spec)?;
            if !domain.is_finite() && kind.is_finite() {
                return Err(Error::FiniteOnly(format!(
                    "sort `{sort}` is continuous; use the sampler framework"
                )));
            }
            interp.sorts.insert(sort, domain);
        }

        let funcs = section("funcs")?;
        let preds = section("preds")?;
        let mfuncs = section("mfuncs")?;
        let mpreds = section("mpreds")?;
        for (name, map) in [("funcs", &funcs), ("preds", &preds), ("mfuncs", &mfuncs), ("mpreds", &mpreds)] {
            for key in map.keys() {
                let ok = match name {
                    "funcs" => sig.funcs.contains_key(key),
                    "preds" => sig.preds.contains_key(key),
                    "mfuncs" => sig.mfuncs.contains_key(key),
                    _ => sig.mpreds.contains_key(key),
                };
                if !ok {
                    return Err(Error::Schema(format!("`{key}` in `{name}` is not declared in the signature")));
                }
            }
        }

        for (name, decl) in &sig.funcs {
            let imp = match funcs.get(name) {
                Some(spec) => interp.parse_func(name, &decl.args, Some(&decl.result), spec)?,
                None => match Builtin::from_name(name).filter(|b| !b.is_comparison()) {
                    Some(b) => FuncImpl::Builtin(b),
                    None => return Err(Error::MissingSymbol(format!("function `{name}`"))),
                },
            };
            check_builtin_arity(name, &imp, decl.args.len())?;
            interp.funcs.insert(name.clone(), imp);
        }
        for (name, decl) in &sig.preds {
            let imp = match preds.get(name) {
                Some(spec) => interp.parse_func(name, &decl.args, None, spec)?,
                None => match Builtin::from_name(name).filter(Builtin::is_comparison) {
                    Some(b) => FuncImpl::Builtin(b),
                    None => return Err(Error::MissingSymbol(format!("predicate `{name}`"))),
                },
            };
            check_builtin_arity(name, &imp, decl.args.len())?;
            interp.preds.insert(name.clone(), imp);
        }
        for (name, decl) in &sig.mfuncs {
            let imp = match mfuncs.get(name) {
                Some(spec) => interp.parse_mfunc(name, &decl.args, Some(&decl.result), spec)?,
                None => match Stochastic::from_name(name) {
                    Some(s) => MFuncImpl::Builtin(s),
                    None => return Err(Error::MissingSymbol(format!("computational function `{name}`"))),
                },
            };
            interp.check_mfunc(name, &imp, decl.args.len())?;
            interp.mfuncs.insert(name.clone(), imp);
        }
        for (name, decl) in &sig.mpreds {
            let imp = match mpreds.get(name) {
                Some(spec) => interp.parse_mfunc(name, &decl.args, None, spec)?,
                None => match Stochastic::from_name(name).filter(Stochastic::is_finite) {
                    Some(s) => MFuncImpl::Builtin(s),
                    None => return Err(Error::MissingSymbol(format!("computational predicate `{name}`"))),
                },
            };
            if matches!(imp, MFuncImpl::Builtin(s) if !s.is_finite()) {
                return Err(Error::Schema(format!("computational predicate `{name}` must be boolean-valued")));
            }
            interp.check_mfunc(name, &imp, decl.args.len())?;
            interp.mpreds.insert(name.clone(), imp);
        }

        if let Some(vars) = obj.get("vars") {
            interp.load_network(vars)?;
        }
        Ok(interp)
    }

    fn load_network(&mut self, vars: &Json) -> Result<()> {
        let list = vars.as_array().ok_or_else(|| Error::Schema("`vars` must be a list".into()))?;
        let mut network = Network::default();
        for entry in list {
            let obj = entry.as_object().ok_or_else(|| Error::Schema("network variable must be an object".into()))?;
            let name = str_field(obj, "name")?;
            let sort = str_field(obj, "sort")?;
            if !self.signature.sorts.contains(&sort) {
                return Err(Error::UnknownSort(format!("`{sort}` of network variable `{name}`")));
            }
            let parents: Vec<String> = match obj.get("parents") {
                None => Vec::new(),
                Some(Json::Array(ps)) => ps
                    .iter()
                    .map(|p| p.as_str().map(str::to_string))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Schema(format!("parents of `{name}` must be names")))?,
                Some(_) => return Err(Error::Schema(format!("parents of `{name}` must be a list"))),
            };
            let (mfunc, synthetic) = match (obj.get("mfunc"), obj.get("rows")) {
                (Some(Json::String(m)), None) => (m.clone(), false),
                (None, Some(rows)) => {
                    let parent_sorts: Vec<String> = parents
                        .iter()
                        .map(|p| {
                            network
                                .var(p)
                                .map(|v| v.sort.clone())
                                .ok_or_else(|| Error::UnknownVariable(format!("parent `{p}` of `{name}`")))
                        })
                        .collect::<Result<_>>()?;
                    let synthetic = format!("cpt_{name}");
                    let imp = self.parse_mfunc(&synthetic, &parent_sorts, Some(&sort), &json!({"kind": "ctable", "rows": rows}))?;
                    self.check_mfunc(&synthetic, &imp, parent_sorts.len())?;
                    self.mfuncs.insert(synthetic.clone(), imp);
                    self.extra_mfuncs.insert(
                        synthetic.clone(),
                        FuncDecl { args: parent_sorts, result: sort.clone() },
                    );
                    (synthetic, true)
                }
                _ => return Err(Error::Schema(format!("network variable `{name}` needs exactly one of `rows` or `mfunc`"))),
            };
            if network.var(&name).is_some() {
                return Err(Error::DuplicateSymbol(format!("network variable `{name}`")));
            }
            network.vars.push(NetworkVar { name, sort, parents, mfunc, synthetic });
        }
        self.network = Some(network);
        Ok(())
    }

    fn parse_func(&self, name: &str, args: &[String], result: Option<&String>, spec: &Json) -> Result<FuncImpl> {
        let kind = spec.get("kind").and_then(Json::as_str).unwrap_or("table");
        match kind {
            "builtin" => {
                let b = spec
                    .get("name")
                    .and_then(Json::as_str)
                    .and_then(Builtin::from_name)
                    .ok_or_else(|| Error::Schema(format!("`{name}`: unknown builtin")))?;
                if b.is_comparison() != result.is_none() {
                    return Err(Error::Schema(format!("`{name}`: builtin `{}` has the wrong kind", b.name())));
                }
                Ok(FuncImpl::Builtin(b))
            }
            "table" => {
                let rows = rows_of(name, spec)?;
                let mut table = BTreeMap::new();
                for row in rows {
                    let (key, last) = self.split_row(name, args, row)?;
                    let value = match result {
                        Some(sort) => {
                            let v = Value::from_json(last)?;
                            self.check_member(name, sort, &v)?;
                            v
                        }
                        None => Value::Boolean(truth(name, last)?),
                    };
                    if table.insert(key, value).is_some() {
                        return Err(Error::Schema(format!("`{name}` has duplicate rows")));
                    }
                }
                let default = match spec.get("default") {
                    None => None,
                    Some(d) if result.is_none() => Some(Value::Boolean(truth(name, d)?)),
                    Some(d) => Some(Value::from_json(d)?),
                };
                Ok(FuncImpl::Table { rows: table, default })
            }
            other => Err(Error::Schema(format!("`{name}`: unknown implementation kind `{other}`"))),
        }
    }

    fn parse_mfunc(&self, name: &str, args: &[String], result: Option<&String>, spec: &Json) -> Result<MFuncImpl> {
        let kind = spec.get("kind").and_then(Json::as_str).unwrap_or("ctable");
        match kind {
            "builtin" => spec
                .get("name")
                .and_then(Json::as_str)
                .and_then(Stochastic::from_name)
                .map(MFuncImpl::Builtin)
                .ok_or_else(|| Error::Schema(format!("`{name}`: unknown stochastic builtin"))),
            "ctable" => {
                let mut table = BTreeMap::new();
                for row in rows_of(name, spec)? {
                    let (key, last) = self.split_row(name, args, row)?;
                    let outcome = self.parse_outcome(name, result, last)?;
                    if table.insert(key, outcome).is_some() {
                        return Err(Error::Schema(format!("`{name}` has duplicate rows")));
                    }
                }
                Ok(MFuncImpl::CTable(table))
            }
            other => Err(Error::Schema(format!("`{name}`: unknown implementation kind `{other}`"))),
        }
    }

    fn parse_outcome(&self, name: &str, result: Option<&String>, j: &Json) -> Result<Outcome> {
        let items = j
            .as_array()
            .filter(|a| !a.is_empty())
            .ok_or_else(|| Error::Schema(format!("`{name}`: row outcome must be a non-empty list")))?;
        let value = |j: &Json| -> Result<Value> {
            let v = match result {
                Some(_) => Value::from_json(j)?,
                None => Value::Boolean(truth(name, j)?),
            };
            if let Some(sort) = result {
                self.check_member(name, sort, &v)?;
            }
            Ok(v)
        };
        if items.iter().all(|it| matches!(it, Json::Array(pair) if pair.len() == 2)) {
            let mut entries = Vec::with_capacity(items.len());
            for it in items {
                let pair = it.as_array().expect("checked above");
                let p = pair[1]
                    .as_f64()
                    .ok_or_else(|| Error::Schema(format!("`{name}`: probability must be a number")))?;
                entries.push((value(&pair[0])?, p));
            }
            let dist = Distribution::new(entries)
                .map_err(|e| Error::InvalidDistribution(format!("`{name}`: {e}")))?;
            Ok(Outcome::Dist(dist))
        } else if items.iter().all(|it| !it.is_array() && !it.is_object()) {
            let set = items.iter().map(value).collect::<Result<Vec<_>>>()?;
            Ok(Outcome::Set(NonEmpty::new(set).expect("non-empty")))
        } else {
            Err(Error::Schema(format!("`{name}`: outcomes must be [value, probability] pairs or plain values")))
        }
    }

    /// Framework restrictions on computational symbols.
    fn check_mfunc(&self, name: &str, imp: &MFuncImpl, arity: usize) -> Result<()> {
        match imp {
            MFuncImpl::Builtin(s) => {
                if s.arity() != arity {
                    return Err(Error::ArityMismatch { symbol: name.to_string(), expected: arity, found: s.arity() });
                }
                if !s.is_finite() && self.kind.is_finite() {
                    return Err(Error::FiniteOnly(format!(
                        "`{name}` uses the continuous builtin `{}`; use the sampler framework",
                        s.name()
                    )));
                }
            }
            MFuncImpl::CTable(rows) => {
                for outcome in rows.values() {
                    match (outcome, self.kind) {
                        (Outcome::Set(_), MonadKind::Distribution | MonadKind::Sampler) => {
                            return Err(Error::Schema(format!(
                                "`{name}` has set-valued rows, which need the lp framework"
                            )))
                        }
                        (Outcome::Set(s), MonadKind::Identity) if s.len() > 1 => {
                            return Err(Error::Nondeterministic(format!("`{name}` has a row with several outcomes")))
                        }
                        (Outcome::Dist(d), MonadKind::Identity) if !d.is_dirac() => {
                            return Err(Error::Nondeterministic(format!("`{name}` has a non-Dirac row")))
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok(())
    }

    fn split_row<'j>(&self, name: &str, args: &[String], row: &'j Json) -> Result<(Vec<Value>, &'j Json)> {
        let cells = row.as_array().ok_or_else(|| Error::Schema(format!("`{name}`: rows must be lists")))?;
        if cells.len() != args.len() + 1 {
            return Err(Error::Schema(format!(
                "`{name}`: row {row} should have {} argument(s) and a result",
                args.len()
            )));
        }
        let mut key = Vec::with_capacity(args.len());
        for (cell, sort) in cells.iter().zip(args) {
            let v = Value::from_json(cell)?;
            self.check_member(name, sort, &v)?;
            key.push(v);
        }
        Ok((key, &cells[args.len()]))
    }

    fn check_member(&self, name: &str, sort: &str, v: &Value) -> Result<()> {
        match self.sorts.get(sort) {
            Some(d) if !d.contains(v) => {
                Err(Error::Schema(format!("`{name}`: `{v}` is not an element of sort `{sort}`")))
            }
            _ => Ok(()),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn kind(&self) -> MonadKind {
        self.kind
    }

    pub fn domain(&self, sort: &str) -> Option<&Domain> {
        self.sorts.get(sort)
    }

    pub fn network(&self) -> Option<&Network> {
        self.network.as_ref()
    }

    pub fn func_impl(&self, name: &str) -> Option<&FuncImpl> {
        self.funcs.get(name)
    }

    pub fn mfunc_impl(&self, name: &str) -> Option<&MFuncImpl> {
        self.mfuncs.get(name).or_else(|| self.mpreds.get(name))
    }

    /// Declaration of a computational function, including network tables.
    pub fn mfunc_decl(&self, name: &str) -> Option<&FuncDecl> {
        self.signature.mfunc(name).or_else(|| self.extra_mfuncs.get(name))
    }

    /// Weighted elements (finite sorts) or sampled points (continuous sorts).
    pub fn quantifier_family(&self, sort: &str, samples: Option<usize>, key: &RandomKey) -> Result<DomainFamily> {
        let domain = self
            .sorts
            .get(sort)
            .ok_or_else(|| Error::MissingSymbol(format!("no domain for sort `{sort}`")))?;
        domain.family(samples, key)
    }

    pub fn apply_function(&self, f: &str, args: &[Value]) -> Result<Value> {
        match self.funcs.get(f) {
            Some(FuncImpl::Builtin(b)) => b.apply(args),
            Some(FuncImpl::Table { rows, default }) => lookup(rows, args)
                .or(default.as_ref())
                .cloned()
                .ok_or_else(|| missing_row(f, args)),
            None => Err(Error::MissingSymbol(format!("function `{f}`"))),
        }
    }

    /// Ordinary predicates, including the implicit comparisons.
    pub fn apply_predicate(&self, p: &str, args: &[Value]) -> Result<bool> {
        match self.preds.get(p) {
            Some(FuncImpl::Builtin(b)) => b.compare(args),
            Some(FuncImpl::Table { rows, default }) => {
                let v = lookup(rows, args).or(default.as_ref()).ok_or_else(|| missing_row(p, args))?;
                v.as_bool().ok_or_else(|| Error::Type(format!("`{p}` returned `{v}`")))
            }
            None => match self.comparison(p) {
                Some(b) => b.compare(args),
                None => Err(Error::MissingSymbol(format!("predicate `{p}`"))),
            },
        }
    }

    /// The builtin comparison behind a predicate name, if any.
    pub fn comparison(&self, p: &str) -> Option<Builtin> {
        match self.preds.get(p) {
            Some(FuncImpl::Builtin(b)) => Some(*b),
            Some(_) => None,
            None if COMPARISONS.contains(&p) => Builtin::from_name(p),
            None => None,
        }
    }

    /// `I(m)(args)` as a computation of the interpretation's monad kind.
    pub fn apply_computational(&self, m: &str, args: &[Value]) -> Result<Computation<Value>> {
        let boolean = self.mpreds.contains_key(m);
        let imp = self
            .mfunc_impl(m)
            .ok_or_else(|| Error::MissingSymbol(format!("computational symbol `{m}`")))?;
        match imp {
            MFuncImpl::CTable(rows) => {
                let outcome = lookup(rows, args).ok_or_else(|| missing_row(m, args))?;
                outcome_computation(m, outcome, self.kind)
            }
            MFuncImpl::Builtin(s) => stochastic(*s, m, args, boolean, self.kind),
        }
    }

    /// A computational predicate as a computation over truth values.
    pub fn apply_mpred(&self, p: &str, args: &[Value]) -> Result<Computation<bool>> {
        let name = p.to_string();
        self.apply_computational(p, args)?.map(move |v| v.as_bool().unwrap_or_else(|| {
            debug_assert!(false, "{name} returned non-boolean {v}");
            false
        }))
    }

    /// Document in the interpretation schema that reloads to `self`.
    pub fn to_json(&self) -> Json {
        let func_json = |imp: &FuncImpl| match imp {
            FuncImpl::Builtin(b) => json!({"kind": "builtin", "name": b.name()}),
            FuncImpl::Table { rows, default } => {
                let rows: Vec<Json> = rows
                    .iter()
                    .map(|(k, v)| Json::Array(k.iter().chain([v]).map(Value::to_json).collect()))
                    .collect();
                let mut o = json!({"kind": "table", "rows": rows});
                if let Some(d) = default {
                    o["default"] = d.to_json();
                }
                o
            }
        };
        let mfunc_json = |imp: &MFuncImpl| match imp {
            MFuncImpl::Builtin(s) => json!({"kind": "builtin", "name": s.name()}),
            MFuncImpl::CTable(rows) => json!({"kind": "ctable", "rows": ctable_rows(rows)}),
        };
        let mut doc = Map::new();
        doc.insert("sorts".into(), Json::Object(self.sorts.iter().map(|(k, d)| (k.clone(), d.to_json())).collect()));
        doc.insert("funcs".into(), Json::Object(self.funcs.iter().map(|(k, f)| (k.clone(), func_json(f))).collect()));
        doc.insert("preds".into(), Json::Object(self.preds.iter().map(|(k, f)| (k.clone(), func_json(f))).collect()));
        let user_mfuncs = self.mfuncs.iter().filter(|(k, _)| !self.extra_mfuncs.contains_key(*k));
        doc.insert("mfuncs".into(), Json::Object(user_mfuncs.map(|(k, f)| (k.clone(), mfunc_json(f))).collect()));
        doc.insert("mpreds".into(), Json::Object(self.mpreds.iter().map(|(k, f)| (k.clone(), mfunc_json(f))).collect()));
        if let Some(net) = &self.network {
            let vars: Vec<Json> = net
                .vars
                .iter()
                .map(|v| {
                    let mut o = json!({"name": v.name, "sort": v.sort, "parents": v.parents});
                    match (v.synthetic, self.mfuncs.get(&v.mfunc)) {
                        (true, Some(MFuncImpl::CTable(rows))) => o["rows"] = Json::Array(ctable_rows(rows)),
                        _ => o["mfunc"] = json!(v.mfunc),
                    }
                    o
                })
                .collect();
            doc.insert("vars".into(), Json::Array(vars));
        }
        Json::Object(doc)
    }
}

fn ctable_rows(rows: &BTreeMap<Vec<Value>, Outcome>) -> Vec<Json> {
    rows.iter()
        .map(|(k, outcome)| {
            let out = match outcome {
                Outcome::Dist(d) => Json::Array(d.entries().iter().map(|(v, p)| json!([v.to_json(), p])).collect()),
                Outcome::Set(s) => Json::Array(s.iter().map(Value::to_json).collect()),
            };
            Json::Array(k.iter().map(Value::to_json).chain([out]).collect())
        })
        .collect()
}

fn outcome_computation(m: &str, outcome: &Outcome, kind: MonadKind) -> Result<Computation<Value>> {
    let nondet = || Error::Nondeterministic(format!("`{m}` has several possible outcomes"));
    Ok(match (outcome, kind) {
        (Outcome::Dist(d), MonadKind::Identity) if d.is_dirac() => Computation::Pure(d.entries()[0].0.clone()),
        (Outcome::Set(s), MonadKind::Identity) if s.len() == 1 => Computation::Pure(s.as_slice()[0].clone()),
        (_, MonadKind::Identity) => return Err(nondet()),
        (Outcome::Dist(d), MonadKind::NonEmptySet) => Computation::Set(NonEmpty::new(d.support()).expect("non-empty")),
        (Outcome::Set(s), MonadKind::NonEmptySet) => Computation::Set(s.clone()),
        (Outcome::Dist(d), MonadKind::Distribution) => Computation::Dist(d.clone()),
        (Outcome::Dist(d), MonadKind::Sampler) => Computation::Sampler(Sampler::from_distribution(d.clone())),
        (Outcome::Set(_), _) => {
            return Err(Error::Schema(format!("`{m}` has set-valued rows, which need the lp framework")))
        }
    })
}

fn stochastic(s: Stochastic, m: &str, args: &[Value], boolean: bool, kind: MonadKind) -> Result<Computation<Value>> {
    check_arity(m, s.arity(), args.len())?;
    let num = |i: usize| {
        args[i]
            .as_f64()
            .ok_or_else(|| Error::Type(format!("`{m}` needs numeric parameters, got `{}`", args[i])))
    };
    match s {
        Stochastic::Bernoulli => {
            let p = num(0)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ParamOutOfRange(format!("bernoulli({p}): p must be in [0, 1]")));
            }
            let (zero, one) = if boolean {
                (Value::Boolean(false), Value::Boolean(true))
            } else {
                (Value::Integer(0), Value::Integer(1))
            };
            let dist = Distribution::new(vec![(zero, 1.0 - p), (one, p)])?;
            outcome_computation(m, &Outcome::Dist(dist), kind)
        }
        Stochastic::Normal | Stochastic::UniformReal if kind.is_finite() => Err(Error::FiniteOnly(format!(
            "`{m}` is a continuous family; use the sampler framework"
        ))),
        Stochastic::Normal => {
            let (mu, sigma) = (num(0)?, num(1)?);
            let normal = rand_distr::Normal::new(mu, sigma)
                .ok()
                .filter(|_| sigma > 0.0 && mu.is_finite())
                .ok_or_else(|| Error::ParamOutOfRange(format!("normal({mu}, {sigma}): sigma must be > 0")))?;
            Ok(Computation::Sampler(Sampler::new(move |key: &RandomKey| {
                use rand_distr::Distribution as _;
                Ok(Value::Real(normal.sample(&mut key.rng())))
            })))
        }
        Stochastic::UniformReal => {
            let (lo, hi) = (num(0)?, num(1)?);
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return Err(Error::ParamOutOfRange(format!("uniform_real({lo}, {hi}): need lo < hi")));
            }
            Ok(Computation::Sampler(Sampler::new(move |key: &RandomKey| {
                Ok(Value::Real(lo + (hi - lo) * key.uniform()))
            })))
        }
    }
}

/// Exact row lookup, falling back to numeric equality across int/real.
fn lookup<'t, V>(rows: &'t BTreeMap<Vec<Value>, V>, args: &[Value]) -> Option<&'t V> {
    rows.get(args).or_else(|| {
        rows.iter()
            .find(|(k, _)| k.len() == args.len() && k.iter().zip(args).all(|(a, b)| a.loose_eq(b)))
            .map(|(_, v)| v)
    })
}

fn missing_row(symbol: &str, args: &[Value]) -> Error {
    let args: Vec<String> = args.iter().map(Value::to_string).collect();
    Error::MissingTableRow(format!("{symbol}({})", args.join(", ")))
}

fn rows_of<'j>(name: &str, spec: &'j Json) -> Result<&'j Vec<Json>> {
    spec.get("rows")
        .and_then(Json::as_array)
        .ok_or_else(|| Error::Schema(format!("`{name}` needs a `rows` list")))
}

fn truth(name: &str, j: &Json) -> Result<bool> {
    Value::from_json(j)?
        .as_bool()
        .ok_or_else(|| Error::Schema(format!("`{name}`: expected a truth value, found {j}")))
}

fn str_field(obj: &Map<String, Json>, key: &str) -> Result<String> {
    obj.get(key)
        .and_then(Json::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Schema(format!("network variable needs a string `{key}`")))
}

fn check_builtin_arity(name: &str, imp: &FuncImpl, arity: usize) -> Result<()> {
    match imp {
        FuncImpl::Builtin(b) if b.arity() != arity => {
            Err(Error::ArityMismatch { symbol: name.to_string(), expected: arity, found: b.arity() })
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_signature;

    fn traffic_sig() -> Signature {
        parse_signature(
            r#"{"sorts": ["Loc", "Color", "Action"],
                "mfuncs": {"light": {"args": ["Loc"], "result": "Color"},
                           "drive": {"args": ["Loc", "Color"], "result": "Action"}},
                "funcs": {"home": {"args": [], "result": "Loc"}}}"#,
        )
        .unwrap()
    }

    const TRAFFIC: &str = r#"{
        "sorts": {"Loc": ["a"], "Color": ["red", "green"], "Action": ["go", "stop"]},
        "funcs": {"home": {"rows": [["a"]]}},
        "mfuncs": {
            "light": {"kind": "ctable", "rows": [["a", [["red", 0.5], ["green", 0.5]]]]},
            "drive": {"kind": "ctable", "rows": [
                ["a", "red", [["go", 0.25], ["stop", 0.75]]],
                ["a", "green", [["go", 1.0]]]]}
        }
    }"#;

    #[test]
    fn loads_and_applies_tables() {
        let interp = load_interpretation(TRAFFIC, &traffic_sig(), MonadKind::Distribution).unwrap();
        assert_eq!(interp.apply_function("home", &[]).unwrap(), Value::sym("a"));
        match interp.apply_computational("light", &[Value::sym("a")]).unwrap() {
            Computation::Dist(d) => assert_eq!(d.prob(&Value::sym("red")), 0.5),
            other => panic!("{other:?}"),
        }
        assert!(interp.apply_predicate("eq", &[Value::sym("a"), Value::sym("a")]).unwrap());
        assert!(matches!(
            interp.apply_computational("light", &[Value::sym("b")]),
            Err(Error::MissingTableRow(_))
        ));
    }

    #[test]
    fn framework_restrictions() {
        let sig = traffic_sig();
        assert!(matches!(
            load_interpretation(TRAFFIC, &sig, MonadKind::Identity),
            Err(Error::Nondeterministic(_))
        ));
        let lp = load_interpretation(TRAFFIC, &sig, MonadKind::NonEmptySet).unwrap();
        match lp.apply_computational("drive", &[Value::sym("a"), Value::sym("red")]).unwrap() {
            Computation::Set(s) => assert_eq!(s.len(), 2),
            other => panic!("{other:?}"),
        }
        let set_rows = TRAFFIC.replace(r#"[["red", 0.5], ["green", 0.5]]"#, r#"["red", "green"]"#);
        assert!(load_interpretation(&set_rows, &sig, MonadKind::NonEmptySet).is_ok());
        assert!(matches!(
            load_interpretation(&set_rows, &sig, MonadKind::Distribution),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn schema_errors() {
        let sig = traffic_sig();
        let bad_member = TRAFFIC.replace(r#"["go", 1.0]"#, r#"["fly", 1.0]"#);
        assert!(matches!(load_interpretation(&bad_member, &sig, MonadKind::Distribution), Err(Error::Schema(_))));
        let bad_mass = TRAFFIC.replace(r#"["go", 1.0]"#, r#"["go", 0.9]"#);
        assert!(matches!(
            load_interpretation(&bad_mass, &sig, MonadKind::Distribution),
            Err(Error::InvalidDistribution(_))
        ));
        let missing = TRAFFIC.replace(r#""funcs": {"home": {"rows": [["a"]]}},"#, "");
        assert!(matches!(load_interpretation(&missing, &sig, MonadKind::Distribution), Err(Error::MissingSymbol(_))));
        let extra = TRAFFIC.replace(r#""funcs": {"#, r#""funcs": {"ghost": {"rows": []}, "#);
        assert!(matches!(load_interpretation(&extra, &sig, MonadKind::Distribution), Err(Error::Schema(_))));
    }

    #[test]
    fn continuous_needs_sampler() {
        let sig = parse_signature(
            r#"{"sorts": ["R"], "mfuncs": {"normal": {"args": ["R", "R"], "result": "R"}}}"#,
        )
        .unwrap();
        let doc = r#"{"sorts": {"R": {"kind": "real_interval", "lo": -1, "hi": 1}}}"#;
        assert!(matches!(load_interpretation(doc, &sig, MonadKind::Distribution), Err(Error::FiniteOnly(_))));
        let interp = load_interpretation(doc, &sig, MonadKind::Sampler).unwrap();
        let c = interp.apply_computational("normal", &[Value::Real(0.0), Value::Real(1.0)]).unwrap();
        let x = c.sample(&RandomKey::new(1)).unwrap();
        assert!(x.as_f64().unwrap().is_finite());
    }

    #[test]
    fn json_round_trip() {
        let sig = traffic_sig();
        let interp = load_interpretation(TRAFFIC, &sig, MonadKind::Distribution).unwrap();
        let again = Interpretation::from_json(&interp.to_json(), &sig, MonadKind::Distribution).unwrap();
        assert_eq!(interp, again);
    }

    #[test]
    fn network_rows_install_tables() {
        let sig = parse_signature(r#"{"sorts": ["B"]}"#).unwrap();
        let doc = r#"{"sorts": {"B": [0, 1]}, "vars": [
            {"name": "x", "sort": "B", "rows": [[[[0, 0.4], [1, 0.6]]]]},
            {"name": "y", "sort": "B", "parents": ["x"], "rows": [[0, [[1, 1.0]]], [1, [[0, 0.5], [1, 0.5]]]]}]}"#;
        let interp = load_interpretation(doc, &sig, MonadKind::Distribution).unwrap();
        assert_eq!(interp.network().unwrap().vars.len(), 2);
        assert!(interp.mfunc_decl("cpt_y").is_some());
        let again = Interpretation::from_json(&interp.to_json(), &sig, MonadKind::Distribution).unwrap();
        assert_eq!(interp, again);
        let bad = doc.replace(r#""parents": ["x"]"#, r#""parents": ["z"]"#);
        assert!(matches!(load_interpretation(&bad, &sig, MonadKind::Distribution), Err(Error::UnknownVariable(_))));
    }
}
