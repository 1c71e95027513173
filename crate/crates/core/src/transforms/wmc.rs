use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Interpretation, MFuncImpl, NetworkVar, Outcome, Value};
use crate::semantics::{evaluate_sentence, eval_term, Budget, Framework, ReportValue, Valuation};
use crate::syntax::{Formula, Term};

/// Closes `f` over the network variables with a chain of binds
/// `[x1 := m1(parents), x2 := m2(parents), ...] f`.
pub fn wmc_build(vars: &[NetworkVar], i: &Interpretation, f: &Formula) -> Result<Formula> {
    check_order(vars)?;
    let sorts: BTreeMap<&str, &str> = vars.iter().map(|v| (v.name.as_str(), v.sort.as_str())).collect();
    for (name, sort) in f.free_vars().iter() {
        match sorts.get(name) {
            None => return Err(Error::UnknownVariable(format!("`{name}` is free but not a network variable"))),
            Some(s) if *s != sort => {
                return Err(Error::SortMismatch(format!("`{name}` has sort `{s}`, used at `{sort}`")))
            }
            Some(_) => {}
        }
    }
    for v in vars {
        let decl = i
            .mfunc_decl(&v.mfunc)
            .ok_or_else(|| Error::MissingSymbol(format!("computational function `{}`", v.mfunc)))?;
        if decl.args.len() != v.parents.len() {
            return Err(Error::ArityMismatch {
                symbol: v.mfunc.clone(),
                expected: decl.args.len(),
                found: v.parents.len(),
            });
        }
    }
    let mut out = f.clone();
    for v in vars.iter().rev() {
        let args = v.parents.iter().map(|p| Term::var(p, sorts[p.as_str()])).collect();
        out = Formula::bind(&v.name, &v.mfunc, args, out);
    }
    Ok(out)
}

/// Builds the bind chain and evaluates it in the distributional framework.
pub fn wmc(vars: &[NetworkVar], i: &Arc<Interpretation>, f: &Formula) -> Result<f64> {
    let built = wmc_build(vars, i, f)?;
    let fw = Framework::new(i.kind(), None)?;
    let report = evaluate_sentence(&built, &fw, i, Budget::exact(), 0)?;
    match report.value {
        ReportValue::Real(x) => Ok(x),
        other => Err(Error::IncompatibleFramework(format!("weighted model count needs probabilities, got {other}"))),
    }
}

/// `Σ_a w(a) ⟦f⟧(a)` by enumerating every joint assignment, with chain-rule
/// weights read from the tables and `f` evaluated classically.
pub fn wmc_bruteforce(vars: &[NetworkVar], i: &Interpretation, f: &Formula) -> Result<f64> {
    check_order(vars)?;
    let domains = vars
        .iter()
        .map(|v| {
            i.domain(&v.sort)
                .and_then(|d| d.elements())
                .ok_or_else(|| Error::FiniteOnly(format!("network variable `{}` needs a finite sort", v.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    let mut idx = vec![0usize; vars.len()];
    loop {
        let assignment: Vec<&Value> = idx.iter().zip(&domains).map(|(&k, d)| &d[k]).collect();
        let nu: Valuation =
            vars.iter().zip(&assignment).map(|(v, a)| (v.name.clone(), (*a).clone())).collect();
        let mut weight = 1.0;
        for (v, a) in vars.iter().zip(&assignment) {
            let parents = v
                .parents
                .iter()
                .map(|p| nu.get(p).cloned().ok_or_else(|| Error::UnknownVariable(p.clone())))
                .collect::<Result<Vec<_>>>()?;
            weight *= table_prob(i, &v.mfunc, &parents, a)?;
            if weight == 0.0 {
                break;
            }
        }
        if weight > 0.0 && classical(f, i, &nu)? {
            total += weight;
        }
        // Odometer increment over the joint domain.
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(total);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < domains[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn check_order(vars: &[NetworkVar]) -> Result<()> {
    let names: Vec<&str> = vars.iter().map(|v| v.name.as_str()).collect();
    for (j, v) in vars.iter().enumerate() {
        if names[..j].contains(&v.name.as_str()) {
            return Err(Error::DuplicateSymbol(format!("network variable `{}`", v.name)));
        }
        for p in &v.parents {
            match names.iter().position(|n| n == p) {
                Some(k) if k < j => {}
                Some(_) => {
                    return Err(Error::CyclicParents(format!(
                        "`{p}` is a parent of `{}` but does not come before it",
                        v.name
                    )))
                }
                None => return Err(Error::UnknownVariable(format!("parent `{p}` of `{}`", v.name))),
            }
        }
    }
    Ok(())
}

fn table_prob(i: &Interpretation, m: &str, parents: &[Value], a: &Value) -> Result<f64> {
    let rows = match i.mfunc_impl(m) {
        Some(MFuncImpl::CTable(rows)) => rows,
        Some(MFuncImpl::Builtin(s)) => {
            return Err(Error::FiniteOnly(format!("`{m}` is the builtin `{}`; enumeration needs a table", s.name())))
        }
        None => return Err(Error::MissingSymbol(m.to_string())),
    };
    let outcome = rows.get(parents).ok_or_else(|| {
        let args: Vec<String> = parents.iter().map(Value::to_string).collect();
        Error::MissingTableRow(format!("{m}({})", args.join(", ")))
    })?;
    match outcome {
        Outcome::Dist(d) => Ok(d.prob(a)),
        Outcome::Set(_) => Err(Error::Schema(format!("`{m}` has set-valued rows; weights need probabilities"))),
    }
}

/// Two-valued reading of a formula without computational symbols.
fn classical(f: &Formula, i: &Interpretation, nu: &Valuation) -> Result<bool> {
    let args = |ts: &[Term]| ts.iter().map(|t| eval_term(t, i, nu)).collect::<Result<Vec<_>>>();
    Ok(match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Prop(p) => i.apply_predicate(p, &[])?,
        Formula::Atom { pred, args: ts } => i.apply_predicate(pred, &args(ts)?)?,
        Formula::Not(g) => !classical(g, i, nu)?,
        Formula::And(g, h) => classical(g, i, nu)? && classical(h, i, nu)?,
        Formula::Or(g, h) => classical(g, i, nu)? || classical(h, i, nu)?,
        Formula::Implies(g, h) => !classical(g, i, nu)? || classical(h, i, nu)?,
        Formula::Forall { var, sort, body } | Formula::Exists { var, sort, body } => {
            let elems = i
                .domain(sort)
                .and_then(|d| d.elements())
                .ok_or_else(|| Error::FiniteOnly(format!("sort `{sort}` is not finite")))?;
            let forall = matches!(f, Formula::Forall { .. });
            let mut acc = forall;
            for a in elems {
                let v = classical(body, i, &nu.with(var, a))?;
                if v != forall {
                    acc = v;
                    break;
                }
            }
            acc
        }
        Formula::MProp(_) | Formula::MAtom { .. } | Formula::Bind { .. } => {
            return Err(Error::IncompatibleFramework(
                "weighted model counting needs a formula without computational symbols".into(),
            ))
        }
    })
}

