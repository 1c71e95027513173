use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use nesy_core::effects::{set_broken_dist_bind, MonadKind};
use nesy_core::model::{load_interpretation, Interpretation};
use nesy_core::selftest::{self, Scope};
use nesy_core::semantics::{evaluate_sentence, Budget, EvalReport, Framework, ReportValue};
use nesy_core::syntax::{parse_formula, parse_formula_in, parse_signature, Signature};
use nesy_core::transforms::{argmax_interpretation, wmc_bruteforce};

use crate::{EvalArgs, FormulaSource, Inputs, ScopeArg, SelftestArgs, TransformArgs, TransformName, WmcArgs};

type CmdResult = Result<ExitCode, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("IoError: {}: {e}", path.display()))
}

fn load(inputs: &Inputs, kind: MonadKind) -> Result<(Signature, Interpretation), String> {
    let sig = parse_signature(&read(&inputs.sig)?).map_err(|e| e.to_string())?;
    let interp = load_interpretation(&read(&inputs.interp)?, &sig, kind).map_err(|e| e.to_string())?;
    Ok((sig, interp))
}

fn formula_text(src: &FormulaSource) -> Result<String, String> {
    match (&src.formula, &src.formula_file) {
        (Some(text), _) => Ok(text.clone()),
        (None, Some(path)) => read(path),
        (None, None) => Err("usage: one of --formula or --formula-file is required".into()),
    }
}

fn real(x: f64, machine: bool) -> String {
    if machine {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn report_line(r: &EvalReport, machine: bool) -> String {
    match (r.samples, r.seed, r.stderr) {
        (Some(n), Some(seed), Some(se)) => {
            let est = r.as_f64().unwrap_or(f64::NAN);
            format!("estimate={} stderr={} samples={n} seed={seed}", real(est, machine), real(se, machine))
        }
        _ => match r.value {
            ReportValue::Real(x) => format!("value={}", real(x, machine)),
            v => format!("value={v}"),
        },
    }
}

fn budget(a: &EvalArgs, monad: MonadKind) -> Result<(Budget, u64), String> {
    if monad != MonadKind::Sampler {
        if a.samples.is_some() || a.seed.is_some() || a.inner_samples.is_some() {
            return Err(format!(
                "usage: --samples, --seed and --inner-samples only apply to the sampler framework, not {}",
                monad.cli_name()
            ));
        }
        return Ok((Budget::exact(), 0));
    }
    let (Some(n), Some(seed)) = (a.samples, a.seed) else {
        return Err("usage: the sampler framework needs both --samples and --seed".into());
    };
    if n == 0 {
        return Err("usage: --samples must be at least 1".into());
    }
    let mut budget = Budget::samples(n);
    if let Some(inner) = a.inner_samples {
        if inner == 0 {
            return Err("usage: --inner-samples must be at least 1".into());
        }
        budget.inner_samples = inner;
    }
    Ok((budget, seed))
}

pub fn eval(a: EvalArgs) -> CmdResult {
    let fw = Framework::parse(&a.framework, a.algebra.as_deref()).map_err(|e| e.to_string())?;
    let (budget, seed) = budget(&a, fw.monad())?;
    let (sig, interp) = load(&a.inputs, fw.monad())?;
    let f = parse_formula(&formula_text(&a.formula)?, &sig).map_err(|e| e.to_string())?;
    let r = evaluate_sentence(&f, &fw, &Arc::new(interp), budget, seed).map_err(|e| e.to_string())?;
    println!("{}", report_line(&r, a.output.machine));
    Ok(ExitCode::SUCCESS)
}

pub fn transform(a: TransformArgs) -> CmdResult {
    let (_, interp) = load(&a.inputs, MonadKind::Distribution)?;
    let out = match a.name {
        TransformName::Argmax => argmax_interpretation(&interp).map_err(|e| e.to_string())?,
    };
    let text = serde_json::to_string_pretty(&out.to_json()).map_err(|e| format!("IoError: {e}"))?;
    fs::write(&a.out, text + "\n").map_err(|e| format!("IoError: {}: {e}", a.out.display()))?;
    let out_path = a.out.display();
    if a.output.machine {
        println!("transform=argmax out={out_path}");
    } else {
        println!("argmax: wrote {out_path}");
    }
    Ok(ExitCode::SUCCESS)
}

pub fn wmc(a: WmcArgs) -> CmdResult {
    let (sig, interp) = load(&a.inputs, MonadKind::Distribution)?;
    let vars = interp
        .network()
        .ok_or("SchemaError: the interpretation has no `vars` network section")?
        .vars
        .clone();
    let free: Vec<(&str, &str)> = vars.iter().map(|v| (&*v.name, &*v.sort)).collect();
    let f = parse_formula_in(&formula_text(&a.formula)?, &sig, &free).map_err(|e| e.to_string())?;
    let interp = Arc::new(interp);
    let value = nesy_core::transforms::wmc(&vars, &interp, &f).map_err(|e| e.to_string())?;
    let oracle = if a.oracle {
        Some(wmc_bruteforce(&vars, &interp, &f).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let m = a.output.machine;
    let mut fields = vec![format!("wmc={}", real(value, m))];
    fields.extend(oracle.map(|o| format!("oracle={}", real(o, m))));
    println!("{}", fields.join(if m { " " } else { "\n" }));
    Ok(ExitCode::SUCCESS)
}

pub fn selftest(a: SelftestArgs) -> CmdResult {
    if a.break_dist_bind {
        set_broken_dist_bind(true);
    }
    let scope = match a.scope {
        ScopeArg::Laws => Scope::Laws,
        ScopeArg::All => Scope::All,
    };
    let only = a.only.unwrap_or_default();
    let suites = selftest::run_filtered(scope, a.seed, |name| name.contains(&only));
    if suites.is_empty() {
        return Err(format!("usage: no suite name contains `{only}`"));
    }
    for s in &suites {
        println!("{s}");
    }
    let failed = suites.iter().filter(|s| !s.passed()).count();
    println!("suites={} passed={} failed={failed}", suites.len(), suites.len() - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
