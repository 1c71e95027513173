use rand_distr::{Distribution as _, Normal};
use serde_json::{json, Map, Value as Json};

use crate::effects::RandomKey;
use crate::error::{Error, Result};

use super::value::Value;

/// Largest integer range that is enumerated for quantification.
pub const MAX_INT_RANGE: i64 = 10_000_000;

const MAX_REJECTIONS: usize = 100_000;

/// Quantifier measure attached to a finite sort.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// Unit weight per element.
    Counting,
    /// Weight `1/n` per element.
    Mean,
    /// Explicit weights aligned with the element order.
    Weighted(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Uniform,
    /// Normal density, truncated to the interval when it is bounded.
    Normal { mu: f64, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Enum { values: Vec<Value>, measure: Measure },
    IntRange { lo: i64, hi: i64, measure: Measure },
    RealInterval { lo: f64, hi: f64, density: Density },
}

/// Elements of a sort paired with their quantifier weights (finite sorts),
/// or points drawn from its density (continuous sorts).
#[derive(Debug, Clone, PartialEq)]
pub enum DomainFamily {
    Exact(Vec<(f64, Value)>),
    Sampled(Vec<Value>),
}

impl Domain {
    pub fn is_finite(&self) -> bool {
        !matches!(self, Domain::RealInterval { .. })
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Domain::Enum { values, .. } => Some(values.len()),
            Domain::IntRange { lo, hi, .. } => Some((hi - lo + 1) as usize),
            Domain::RealInterval { .. } => None,
        }
    }

    /// Elements of a finite domain in declaration order.
    pub fn elements(&self) -> Option<Vec<Value>> {
        match self {
            Domain::Enum { values, .. } => Some(values.clone()),
            Domain::IntRange { lo, hi, .. } => Some((*lo..=*hi).map(Value::Integer).collect()),
            Domain::RealInterval { .. } => None,
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match self {
            Domain::Enum { values, .. } => values.iter().any(|x| x.loose_eq(v)),
            Domain::IntRange { lo, hi, .. } => matches!(v, Value::Integer(i) if lo <= i && i <= hi),
            Domain::RealInterval { lo, hi, .. } => v.as_f64().is_some_and(|x| *lo <= x && x <= *hi),
        }
    }

    /// Weighted elements for finite sorts; `samples` points for continuous ones.
    pub fn family(&self, samples: Option<usize>, key: &RandomKey) -> Result<DomainFamily> {
        match self {
            Domain::Enum { measure, .. } | Domain::IntRange { measure, .. } => {
                let elems = self.elements().unwrap_or_default();
                let n = elems.len() as f64;
                let weights: Vec<f64> = match measure {
                    Measure::Counting => vec![1.0; elems.len()],
                    Measure::Mean => vec![1.0 / n; elems.len()],
                    Measure::Weighted(w) => w.clone(),
                };
                Ok(DomainFamily::Exact(weights.into_iter().zip(elems).collect()))
            }
            Domain::RealInterval { .. } => {
                let n = match samples {
                    Some(n) if n >= 1 => n,
                    _ => {
                        return Err(Error::BudgetMissing(
                            "quantifying a continuous sort needs a sample budget".into(),
                        ))
                    }
                };
                let points = (0..n as u64)
                    .map(|i| self.sample_point(&key.child(i)).map(Value::Real))
                    .collect::<Result<Vec<_>>>()?;
                Ok(DomainFamily::Sampled(points))
            }
        }
    }

    /// One draw from a continuous domain's density.
    pub fn sample_point(&self, key: &RandomKey) -> Result<f64> {
        let Domain::RealInterval { lo, hi, density } = self else {
            return Err(Error::Type("only real intervals carry a density".into()));
        };
        match density {
            Density::Uniform => Ok(lo + (hi - lo) * key.uniform()),
            Density::Normal { mu, sigma } => {
                let normal = Normal::new(*mu, *sigma)
                    .map_err(|e| Error::ParamOutOfRange(format!("normal({mu}, {sigma}): {e}")))?;
                let mut rng = key.rng();
                for _ in 0..MAX_REJECTIONS {
                    let x = normal.sample(&mut rng);
                    if *lo <= x && x <= *hi {
                        return Ok(x);
                    }
                }
                Err(Error::ParamOutOfRange(format!(
                    "truncated normal on [{lo}, {hi}] rejected {MAX_REJECTIONS} draws"
                )))
            }
        }
    }

    /// Parses a domain spec and checks its invariants.
    pub fn from_json(sort: &str, j: &Json) -> Result<Self> {
        if j.is_array() {
            return Domain::from_json(sort, &json!({"kind": "enum", "values": j}));
        }
        let obj = j
            .as_object()
            .ok_or_else(|| Error::Schema(format!("domain of `{sort}` must be an object")))?;
        let kind = obj.get("kind").and_then(Json::as_str).unwrap_or("enum");
        let domain = match kind {
            "enum" => {
                let values = obj
                    .get("values")
                    .and_then(Json::as_array)
                    .ok_or_else(|| Error::Schema(format!("enum domain `{sort}` needs `values`")))?
                    .iter()
                    .map(Value::from_json)
                    .collect::<Result<Vec<_>>>()?;
                if values.is_empty() {
                    return Err(Error::EmptyDomain(sort.to_string()));
                }
                let mut sorted = values.clone();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Schema(format!("enum domain `{sort}` has duplicate values")));
                }
                let measure = parse_measure(sort, obj, &values)?;
                Domain::Enum { values, measure }
            }
            "int_range" => {
                let lo = int_field(sort, obj, "lo")?;
                let hi = int_field(sort, obj, "hi")?;
                if lo > hi {
                    return Err(Error::EmptyDomain(format!("{sort}: lo {lo} > hi {hi}")));
                }
                if hi - lo >= MAX_INT_RANGE {
                    return Err(Error::Schema(format!("int_range `{sort}` is too large to enumerate")));
                }
                let values: Vec<Value> = (lo..=hi).map(Value::Integer).collect();
                let measure = parse_measure(sort, obj, &values)?;
                Domain::IntRange { lo, hi, measure }
            }
            "real_interval" => {
                let lo = real_bound(sort, obj, "lo")?;
                let hi = real_bound(sort, obj, "hi")?;
                if !(lo < hi) {
                    return Err(Error::EmptyDomain(format!("{sort}: interval [{lo}, {hi}] is empty")));
                }
                let density = match obj.get("density") {
                    None => Density::Uniform,
                    Some(d) => parse_density(sort, d)?,
                };
                if density == Density::Uniform && !(lo.is_finite() && hi.is_finite()) {
                    return Err(Error::Schema(format!("uniform density on `{sort}` needs finite bounds")));
                }
                Domain::RealInterval { lo, hi, density }
            }
            other => return Err(Error::Schema(format!("unknown domain kind `{other}` for `{sort}`"))),
        };
        Ok(domain)
    }

    pub fn to_json(&self) -> Json {
        let measure_json = |m: &Measure, values: &[Value]| -> Option<(&'static str, Json)> {
            match m {
                Measure::Counting => None,
                Measure::Mean => Some(("measure", json!("mean"))),
                Measure::Weighted(w) => {
                    let map: Map<String, Json> =
                        values.iter().zip(w).map(|(v, w)| (v.to_string(), json!(w))).collect();
                    Some(("weights", Json::Object(map)))
                }
            }
        };
        match self {
            Domain::Enum { values, measure } => {
                let mut o = json!({"kind": "enum", "values": values.iter().map(Value::to_json).collect::<Vec<_>>()});
                if let Some((k, v)) = measure_json(measure, values) {
                    o[k] = v;
                }
                o
            }
            Domain::IntRange { lo, hi, measure } => {
                let mut o = json!({"kind": "int_range", "lo": lo, "hi": hi});
                if let Some((k, v)) = measure_json(measure, &self.elements().unwrap_or_default()) {
                    o[k] = v;
                }
                o
            }
            Domain::RealInterval { lo, hi, density } => {
                let bound = |x: f64| Value::Real(x).to_json();
                let density = match density {
                    Density::Uniform => json!({"kind": "uniform"}),
                    Density::Normal { mu, sigma } => json!({"kind": "normal", "mu": mu, "sigma": sigma}),
                };
                json!({"kind": "real_interval", "lo": bound(*lo), "hi": bound(*hi), "density": density})
            }
        }
    }
}

fn int_field(sort: &str, obj: &Map<String, Json>, key: &str) -> Result<i64> {
    obj.get(key)
        .and_then(Json::as_i64)
        .ok_or_else(|| Error::Schema(format!("int_range `{sort}` needs integer `{key}`")))
}

fn real_bound(sort: &str, obj: &Map<String, Json>, key: &str) -> Result<f64> {
    match obj.get(key) {
        Some(Json::Number(n)) => n.as_f64().ok_or_else(|| Error::Schema(format!("bad bound in `{sort}`"))),
        Some(Json::String(s)) if s == "inf" || s == "+inf" => Ok(f64::INFINITY),
        Some(Json::String(s)) if s == "-inf" => Ok(f64::NEG_INFINITY),
        _ => Err(Error::Schema(format!("real_interval `{sort}` needs numeric `{key}`"))),
    }
}

fn parse_density(sort: &str, d: &Json) -> Result<Density> {
    match d.get("kind").and_then(Json::as_str) {
        Some("uniform") => Ok(Density::Uniform),
        Some("normal") => {
            let get = |k: &str| {
                d.get(k)
                    .and_then(Json::as_f64)
                    .ok_or_else(|| Error::Schema(format!("normal density on `{sort}` needs `{k}`")))
            };
            let (mu, sigma) = (get("mu")?, get("sigma")?);
            if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
                return Err(Error::ParamOutOfRange(format!("normal density on `{sort}`: sigma must be > 0")));
            }
            Ok(Density::Normal { mu, sigma })
        }
        _ => Err(Error::Schema(format!("unknown density for `{sort}`"))),
    }
}

fn parse_measure(sort: &str, obj: &Map<String, Json>, values: &[Value]) -> Result<Measure> {
    let measure = match (obj.get("measure").and_then(Json::as_str), obj.get("weights")) {
        (_, Some(Json::Object(map))) => {
            let mut weights = Vec::with_capacity(values.len());
            for v in values {
                let w = map.get(&v.to_string()).and_then(Json::as_f64).ok_or_else(|| {
                    Error::Schema(format!("weights of `{sort}` miss element `{v}`"))
                })?;
                weights.push(w);
            }
            if map.len() != values.len() {
                return Err(Error::Schema(format!("weights of `{sort}` name unknown elements")));
            }
            Measure::Weighted(weights)
        }
        (_, Some(Json::Array(ws))) => {
            if ws.len() != values.len() {
                return Err(Error::Schema(format!("weights of `{sort}` must align with its values")));
            }
            Measure::Weighted(
                ws.iter()
                    .map(|w| w.as_f64().ok_or_else(|| Error::Schema(format!("non-numeric weight in `{sort}`"))))
                    .collect::<Result<_>>()?,
            )
        }
        (_, Some(_)) => return Err(Error::Schema(format!("weights of `{sort}` must be an object or list"))),
        (None | Some("counting"), None) => Measure::Counting,
        (Some("mean"), None) => Measure::Mean,
        (Some(other), None) => return Err(Error::Schema(format!("unknown measure `{other}`"))),
    };
    if let Measure::Weighted(w) = &measure {
        if let Some(bad) = w.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::NegativeWeight(*bad));
        }
        if w.iter().all(|w| *w == 0.0) {
            return Err(Error::Schema(format!("weights of `{sort}` are all zero")));
        }
    }
    Ok(measure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enum_default_is_counting() {
        let d = Domain::from_json("S", &json!({"kind": "enum", "values": ["a", "b", "c"]})).unwrap();
        let DomainFamily::Exact(fam) = d.family(None, &RandomKey::new(0)).unwrap() else { panic!() };
        assert_eq!(fam, vec![(1.0, Value::sym("a")), (1.0, Value::sym("b")), (1.0, Value::sym("c"))]);
    }

    #[test]
    fn weighted_and_mean_measures() {
        let d = Domain::from_json("S", &json!({"values": ["a", "b"], "weights": {"a": 0.5, "b": 0.5}})).unwrap();
        assert_eq!(d, Domain::Enum {
            values: vec![Value::sym("a"), Value::sym("b")],
            measure: Measure::Weighted(vec![0.5, 0.5]),
        });
        let d = Domain::from_json("N", &json!({"kind": "int_range", "lo": 1, "hi": 4, "measure": "mean"})).unwrap();
        let DomainFamily::Exact(fam) = d.family(None, &RandomKey::new(0)).unwrap() else { panic!() };
        assert!(fam.iter().all(|(w, _)| *w == 0.25));
        assert_eq!(d.to_json()["measure"], json!("mean"));
    }

    #[test]
    fn invalid_domains() {
        assert!(matches!(Domain::from_json("S", &json!({"values": []})), Err(Error::EmptyDomain(_))));
        assert!(matches!(Domain::from_json("S", &json!({"values": [1, 1]})), Err(Error::Schema(_))));
        assert!(matches!(
            Domain::from_json("N", &json!({"kind": "int_range", "lo": 3, "hi": 2})),
            Err(Error::EmptyDomain(_))
        ));
        assert!(matches!(
            Domain::from_json("R", &json!({"kind": "real_interval", "lo": 1.0, "hi": 1.0})),
            Err(Error::EmptyDomain(_))
        ));
        assert!(matches!(
            Domain::from_json("S", &json!({"values": ["a"], "weights": {"a": -1.0}})),
            Err(Error::NegativeWeight(_))
        ));
        assert!(matches!(
            Domain::from_json("R", &json!({"kind": "real_interval", "lo": "-inf", "hi": "inf"})),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn continuous_points_are_reproducible() {
        let d = Domain::from_json("R", &json!({"kind": "real_interval", "lo": 0.0, "hi": 1.0})).unwrap();
        let key = RandomKey::new(17);
        let a = d.family(Some(4), &key).unwrap();
        assert_eq!(a, d.family(Some(4), &key).unwrap());
        let DomainFamily::Sampled(points) = a else { panic!() };
        assert_eq!(points.len(), 4);
        assert!(points.iter().all(|p| d.contains(p)));
        assert!(matches!(d.family(None, &key), Err(Error::BudgetMissing(_))));
    }

    #[test]
    fn sampled_means_converge() {
        let n = 100_000u64;
        let key = RandomKey::new(5);
        let uniform = Domain::RealInterval { lo: 2.0, hi: 4.0, density: Density::Uniform };
        let mean = (0..n).map(|i| uniform.sample_point(&key.child(i)).unwrap()).sum::<f64>() / n as f64;
        let se = (4.0f64 / 12.0).sqrt() / (n as f64).sqrt();
        assert!((mean - 3.0).abs() < 4.0 * se, "uniform mean {mean}");

        // Normal truncated to [0, inf): mean sqrt(2/pi), variance 1 - 2/pi.
        let half = Domain::RealInterval { lo: 0.0, hi: f64::INFINITY, density: Density::Normal { mu: 0.0, sigma: 1.0 } };
        let mean = (0..n).map(|i| half.sample_point(&key.child(i)).unwrap()).sum::<f64>() / n as f64;
        let pi = std::f64::consts::PI;
        let se = (1.0 - 2.0 / pi).sqrt() / (n as f64).sqrt();
        assert!((mean - (2.0 / pi).sqrt()).abs() < 4.0 * se, "half-normal mean {mean}");
    }

    #[test]
    fn bound_strings_round_trip() {
        let spec = json!({"kind": "real_interval", "lo": "-inf", "hi": "inf", "density": {"kind": "normal", "mu": 0.0, "sigma": 2.0}});
        let d = Domain::from_json("R", &spec).unwrap();
        assert_eq!(Domain::from_json("R", &d.to_json()).unwrap(), d);
    }
}
