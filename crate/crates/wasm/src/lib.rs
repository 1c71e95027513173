//! Browser bindings: sentence evaluation, LTN aggregator curves and
//! connective heat maps. Each export returns JSON text so the page needs no
//! glue types.

use std::sync::Arc;

use nesy_core::algebra::{parse_algebra, Connective, Quantifier, TruthAlgebra, TruthValue, WeightedFamily};
use nesy_core::effects::MonadKind;
use nesy_core::model::load_interpretation;
use nesy_core::semantics::{evaluate_sentence, Budget, Framework};
use nesy_core::syntax::{parse_formula, parse_signature};
use serde_json::{json, Value as Json};
use wasm_bindgen::prelude::*;

/// Evaluates `formula` and returns `{"ok": ...}` or `{"error": ...}`.
/// `samples` and `seed` are read only under the sampler framework.
#[wasm_bindgen]
pub fn evaluate(
    signature: &str,
    interpretation: &str,
    formula: &str,
    framework: &str,
    algebra: &str,
    samples: u32,
    seed: u32,
) -> String {
    respond(evaluate_json(signature, interpretation, formula, framework, algebra, samples, seed))
}

/// LTN aggregate of the comma-separated `family` for `steps` values of the
/// parameter from 1 to `p_max`, as `[[p, value], ...]`, plus the family's
/// min and max for reference.
#[wasm_bindgen]
pub fn aggregator_curve(family: &str, quantifier: &str, p_max: f64, steps: u32) -> String {
    respond(curve_json(family, quantifier, p_max, steps))
}

/// `n x n` grid of a binary connective over `[0, 1]^2` (STL: `[-1, 1]^2`),
/// row `i` holding `x = i / (n - 1)`.
#[wasm_bindgen]
pub fn connective_grid(algebra: &str, connective: &str, n: u32) -> String {
    respond(grid_json(algebra, connective, n))
}

fn respond(r: Result<Json, String>) -> String {
    match r {
        Ok(v) => json!({"ok": v}).to_string(),
        Err(e) => json!({"error": e}).to_string(),
    }
}

pub fn evaluate_json(
    signature: &str,
    interpretation: &str,
    formula: &str,
    framework: &str,
    algebra: &str,
    samples: u32,
    seed: u32,
) -> Result<Json, String> {
    let algebra = Some(algebra.trim()).filter(|a| !a.is_empty());
    let fw = Framework::parse(framework, algebra).map_err(|e| e.to_string())?;
    let sig = parse_signature(signature).map_err(|e| e.to_string())?;
    let interp = load_interpretation(interpretation, &sig, fw.monad()).map_err(|e| e.to_string())?;
    let f = parse_formula(formula, &sig).map_err(|e| e.to_string())?;
    let budget = if fw.monad() == MonadKind::Sampler { Budget::samples(samples.max(1) as usize) } else { Budget::exact() };
    let r = evaluate_sentence(&f, &fw, &Arc::new(interp), budget, u64::from(seed)).map_err(|e| e.to_string())?;
    Ok(json!({
        "framework": fw.to_string(),
        "value": r.value.to_string(),
        "stderr": r.stderr,
        "samples": r.samples,
    }))
}

pub fn curve_json(family: &str, quantifier: &str, p_max: f64, steps: u32) -> Result<Json, String> {
    let values = family
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("family value `{}`: {e}", s.trim())))
        .collect::<Result<Vec<f64>, String>>()?;
    if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err("family values must lie in [0, 1]".into());
    }
    let q = match quantifier {
        "forall" => Quantifier::Forall,
        "exists" => Quantifier::Exists,
        other => return Err(format!("unknown quantifier `{other}`")),
    };
    if !(p_max >= 1.0) || steps < 2 {
        return Err("need p_max >= 1 and at least 2 steps".into());
    }
    let fam = WeightedFamily::unit(values.iter().map(|&v| TruthValue::Prob(v)).collect());
    let mut points = Vec::new();
    for i in 0..steps {
        let p = 1.0 + (p_max - 1.0) * f64::from(i) / f64::from(steps - 1);
        let alg = parse_algebra(&format!("ltn:p={p}")).map_err(|e| e.to_string())?;
        let v = alg.aggregate(q, &fam).map_err(|e| e.to_string())?;
        points.push(json!([p, v.as_f64()]));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(json!({"points": points, "min": min, "max": max}))
}

pub fn grid_json(algebra: &str, connective: &str, n: u32) -> Result<Json, String> {
    let alg: TruthAlgebra = parse_algebra(algebra).map_err(|e| e.to_string())?;
    let op = match connective {
        "conj" => Connective::Conj,
        "disj" => Connective::Disj,
        "implies" => Connective::Implies,
        other => return Err(format!("unknown connective `{other}`")),
    };
    if !(2..=256).contains(&n) {
        return Err("grid size must be between 2 and 256".into());
    }
    let stl = alg.is_approximate();
    let at = |i: u32| {
        let t = f64::from(i) / f64::from(n - 1);
        if stl {
            TruthValue::XReal(2.0 * t - 1.0)
        } else {
            TruthValue::Prob(t)
        }
    };
    let mut rows = Vec::new();
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..n {
            let v = alg.apply_connective(op, &[at(i), at(j)]).map_err(|e| e.to_string())?;
            row.push(v.as_f64().ok_or_else(|| format!("{} has no numeric carrier", alg.name()))?);
        }
        rows.push(row);
    }
    Ok(json!({"algebra": alg.name(), "connective": connective, "range": if stl { [-1.0, 1.0] } else { [0.0, 1.0] }, "grid": rows}))
}
