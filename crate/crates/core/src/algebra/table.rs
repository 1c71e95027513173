use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::effects::MonadKind;
use crate::error::{Error, Result};

use super::lift;
use super::stl::{and_r, or_r};
use super::value::{Carrier, Lp3, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgebraKind {
    Boolean,
    Priest,
    Product,
    SProduct,
    LtnP { p: f64 },
    LtnQ { q: f64 },
    StlR { r: f64 },
    /// Boolean table lifted along a monad by binding every argument.
    Lifted(MonadKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    Neg,
    Conj,
    Disj,
    Implies,
}

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Neg => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Connective::Neg => "neg",
            Connective::Conj => "conj",
            Connective::Disj => "disj",
            Connective::Implies => "implies",
        }
    }
}

/// An aggregated truth algebra: constants, connectives and quantifier
/// aggregators over one carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthAlgebra {
    kind: AlgebraKind,
}

/// Builds an algebra by name. Names: `boolean`, `priest`, `product`,
/// `sproduct`, `ltn_p` (param `p`), `ltn_q` (param `q`), `stl_r` (param `r`).
pub fn make_algebra(name: &str, params: &BTreeMap<String, f64>) -> Result<TruthAlgebra> {
    let param = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| Error::ParamOutOfRange(format!("{name} needs parameter `{key}`")))
    };
    let kind = match name {
        "boolean" => AlgebraKind::Boolean,
        "priest" => AlgebraKind::Priest,
        "product" => AlgebraKind::Product,
        "sproduct" => AlgebraKind::SProduct,
        "ltn_p" | "ltn" => AlgebraKind::LtnP { p: param("p")? },
        "ltn_q" | "ltnq" => AlgebraKind::LtnQ { q: param("q")? },
        "stl_r" | "stl" => AlgebraKind::StlR { r: param("r")? },
        other => return Err(Error::UnknownAlgebra(other.to_string())),
    };
    TruthAlgebra::new(kind)
}

/// Parses a selection string such as `product` or `ltn:p=2`.
pub fn parse_algebra(spec: &str) -> Result<TruthAlgebra> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for part in rest.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::UnknownAlgebra(format!("malformed parameter `{part}` in `{spec}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::ParamOutOfRange(format!("`{value}` is not a number")))?;
        params.insert(key.trim().to_string(), value);
    }
    make_algebra(name.trim(), &params)
}

impl FromStr for TruthAlgebra {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_algebra(s)
    }
}

impl TruthAlgebra {
    pub fn new(kind: AlgebraKind) -> Result<Self> {
        match kind {
            AlgebraKind::LtnP { p } if !(p.is_finite() && p >= 1.0) => {
                Err(Error::ParamOutOfRange(format!("ltn_p needs 1 <= p < inf, got {p}")))
            }
            AlgebraKind::LtnQ { q } if !(0.5..=1.0).contains(&q) => {
                Err(Error::ParamOutOfRange(format!("ltn_q needs 0.5 <= q <= 1, got {q}")))
            }
            AlgebraKind::StlR { r } if !(r.is_finite() && r > 0.0) => {
                Err(Error::ParamOutOfRange(format!("stl_r needs r > 0, got {r}")))
            }
            _ => Ok(TruthAlgebra { kind }),
        }
    }

    pub fn boolean() -> Self {
        TruthAlgebra { kind: AlgebraKind::Boolean }
    }

    pub fn priest() -> Self {
        TruthAlgebra { kind: AlgebraKind::Priest }
    }

    pub fn product() -> Self {
        TruthAlgebra { kind: AlgebraKind::Product }
    }

    pub fn sproduct() -> Self {
        TruthAlgebra { kind: AlgebraKind::SProduct }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// Selection string that `parse_algebra` maps back to this algebra.
    pub fn name(&self) -> String {
        match self.kind {
            AlgebraKind::Boolean => "boolean".into(),
            AlgebraKind::Priest => "priest".into(),
            AlgebraKind::Product => "product".into(),
            AlgebraKind::SProduct => "sproduct".into(),
            AlgebraKind::LtnP { p } => format!("ltn:p={p}"),
            AlgebraKind::LtnQ { q } => format!("ltnq:q={q}"),
            AlgebraKind::StlR { r } => format!("stl:r={r}"),
            AlgebraKind::Lifted(kind) => format!("lifted-boolean({kind})"),
        }
    }

    pub fn carrier(&self) -> Carrier {
        match self.kind {
            AlgebraKind::Boolean | AlgebraKind::Lifted(MonadKind::Identity) => Carrier::Boolean,
            AlgebraKind::Priest | AlgebraKind::Lifted(MonadKind::NonEmptySet) => Carrier::Lp3,
            AlgebraKind::Product
            | AlgebraKind::SProduct
            | AlgebraKind::LtnP { .. }
            | AlgebraKind::LtnQ { .. }
            | AlgebraKind::Lifted(MonadKind::Distribution) => Carrier::Prob,
            AlgebraKind::StlR { .. } => Carrier::XReal,
            AlgebraKind::Lifted(MonadKind::Sampler) => Carrier::BoolSampler,
        }
    }

    /// STL only approximates a lattice: its connectives are not associative.
    pub fn is_approximate(&self) -> bool {
        matches!(self.kind, AlgebraKind::StlR { .. })
    }

    pub fn top(&self) -> TruthValue {
        self.constant(true)
    }

    pub fn bot(&self) -> TruthValue {
        self.constant(false)
    }

    fn constant(&self, b: bool) -> TruthValue {
        match self.kind {
            AlgebraKind::Lifted(kind) => lift::computation_to_truth(crate::effects::unit(kind, b)),
            _ => match self.carrier() {
                Carrier::Boolean => TruthValue::B2(b),
                Carrier::Lp3 => TruthValue::Lp3(Lp3::from_bool(b)),
                Carrier::Prob => TruthValue::Prob(if b { 1.0 } else { 0.0 }),
                Carrier::XReal => TruthValue::XReal(if b { f64::INFINITY } else { f64::NEG_INFINITY }),
                Carrier::BoolSampler => unreachable!("only lifted algebras use sampler carriers"),
            },
        }
    }

    /// Embeds a classical truth value `η_Ω(b)` into the carrier.
    pub fn from_bool(&self, b: bool) -> TruthValue {
        self.constant(b)
    }

    pub fn apply_connective(&self, op: Connective, args: &[TruthValue]) -> Result<TruthValue> {
        if args.len() != op.arity() {
            return Err(Error::ArityMismatch {
                symbol: op.name().to_string(),
                expected: op.arity(),
                found: args.len(),
            });
        }
        match op {
            Connective::Neg => self.neg(&args[0]),
            Connective::Conj => self.conj(&args[0], &args[1]),
            Connective::Disj => self.disj(&args[0], &args[1]),
            Connective::Implies => self.implies(&args[0], &args[1]),
        }
    }

    pub fn neg(&self, x: &TruthValue) -> Result<TruthValue> {
        Ok(match self.kind {
            AlgebraKind::Boolean => TruthValue::B2(!self.bool_of(x)?),
            AlgebraKind::Priest => TruthValue::Lp3(match self.lp3_of(x)? {
                Lp3::F => Lp3::T,
                Lp3::B => Lp3::B,
                Lp3::T => Lp3::F,
            }),
            // Residual negation x -> 0.
            AlgebraKind::Product => {
                TruthValue::Prob(if self.prob_of(x)? == 0.0 { 1.0 } else { 0.0 })
            }
            AlgebraKind::SProduct | AlgebraKind::LtnP { .. } | AlgebraKind::LtnQ { .. } => {
                TruthValue::Prob(1.0 - self.prob_of(x)?)
            }
            AlgebraKind::StlR { .. } => TruthValue::XReal(-self.xreal_of(x)?),
            AlgebraKind::Lifted(kind) => lift::lifted_unary(kind, x, |a| !a)?,
        })
    }

    pub fn conj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue> {
        Ok(match self.kind {
            AlgebraKind::Boolean => TruthValue::B2(self.bool_of(x)? && self.bool_of(y)?),
            AlgebraKind::Priest => TruthValue::Lp3(self.lp3_of(x)?.min(self.lp3_of(y)?)),
            AlgebraKind::Product
            | AlgebraKind::SProduct
            | AlgebraKind::LtnP { .. }
            | AlgebraKind::LtnQ { .. } => TruthValue::Prob(self.prob_of(x)? * self.prob_of(y)?),
            AlgebraKind::StlR { r } => TruthValue::XReal(and_r(r, &[(1.0, self.xreal_of(x)?), (1.0, self.xreal_of(y)?)])),
            AlgebraKind::Lifted(kind) => lift::lifted_binary(kind, x, y, |a, b| a && b)?,
        })
    }

    pub fn disj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue> {
        Ok(match self.kind {
            AlgebraKind::Boolean => TruthValue::B2(self.bool_of(x)? || self.bool_of(y)?),
            AlgebraKind::Priest => TruthValue::Lp3(self.lp3_of(x)?.max(self.lp3_of(y)?)),
            // Probabilistic sum, written so the result stays in [0, 1].
            AlgebraKind::Product
            | AlgebraKind::SProduct
            | AlgebraKind::LtnP { .. }
            | AlgebraKind::LtnQ { .. } => {
                TruthValue::Prob(1.0 - (1.0 - self.prob_of(x)?) * (1.0 - self.prob_of(y)?))
            }
            AlgebraKind::StlR { r } => TruthValue::XReal(or_r(r, &[(1.0, self.xreal_of(x)?), (1.0, self.xreal_of(y)?)])),
            AlgebraKind::Lifted(kind) => lift::lifted_binary(kind, x, y, |a, b| a || b)?,
        })
    }

    pub fn implies(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue> {
        Ok(match self.kind {
            AlgebraKind::Boolean => TruthValue::B2(!self.bool_of(x)? || self.bool_of(y)?),
            // Kleene-Dienes: max(¬x, y).
            AlgebraKind::Priest => {
                let nx = match self.neg(x)? {
                    TruthValue::Lp3(v) => v,
                    _ => unreachable!(),
                };
                TruthValue::Lp3(nx.max(self.lp3_of(y)?))
            }
            // Goguen: 1 if x <= y else y / x.
            AlgebraKind::Product => {
                let (a, b) = (self.prob_of(x)?, self.prob_of(y)?);
                TruthValue::Prob(if a <= b { 1.0 } else { b / a })
            }
            // Reichenbach: 1 - x + xy.
            AlgebraKind::SProduct | AlgebraKind::LtnP { .. } | AlgebraKind::LtnQ { .. } => {
                let (a, b) = (self.prob_of(x)?, self.prob_of(y)?);
                TruthValue::Prob(1.0 - a * (1.0 - b))
            }
            AlgebraKind::StlR { r } => TruthValue::XReal(or_r(r, &[(1.0, -self.xreal_of(x)?), (1.0, self.xreal_of(y)?)])),
            AlgebraKind::Lifted(kind) => lift::lifted_binary(kind, x, y, |a, b| !a || b)?,
        })
    }

    /// The `⊗` monoid slot. Equal to `conj` except for STL, where it is `×`.
    pub fn monoid_conj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue> {
        match self.kind {
            AlgebraKind::StlR { .. } => Ok(TruthValue::XReal(self.xreal_of(x)? * self.xreal_of(y)?)),
            _ => self.conj(x, y),
        }
    }

    /// The `⊕` monoid slot. Equal to `disj` except for STL, where it is `+`.
    pub fn monoid_disj(&self, x: &TruthValue, y: &TruthValue) -> Result<TruthValue> {
        match self.kind {
            AlgebraKind::StlR { .. } => Ok(TruthValue::XReal(self.xreal_of(x)? + self.xreal_of(y)?)),
            _ => self.disj(x, y),
        }
    }

    fn mismatch(&self, v: &TruthValue) -> Error {
        Error::CarrierMismatch(format!(
            "{} expects {} values, got {} ({v})",
            self.name(),
            self.carrier(),
            v.carrier()
        ))
    }

    pub(crate) fn bool_of(&self, v: &TruthValue) -> Result<bool> {
        match v {
            TruthValue::B2(b) => Ok(*b),
            _ => Err(self.mismatch(v)),
        }
    }

    pub(crate) fn lp3_of(&self, v: &TruthValue) -> Result<Lp3> {
        match v {
            TruthValue::Lp3(x) => Ok(*x),
            _ => Err(self.mismatch(v)),
        }
    }

    pub(crate) fn prob_of(&self, v: &TruthValue) -> Result<f64> {
        match v {
            TruthValue::Prob(p) | TruthValue::Estimate { value: p, .. } => Ok(*p),
            _ => Err(self.mismatch(v)),
        }
    }

    pub(crate) fn xreal_of(&self, v: &TruthValue) -> Result<f64> {
        match v {
            TruthValue::XReal(x) if !x.is_nan() => Ok(*x),
            _ => Err(self.mismatch(v)),
        }
    }
}

impl fmt::Display for TruthAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> TruthValue {
        TruthValue::Prob(x)
    }

    #[test]
    fn implications() {
        let product = TruthAlgebra::product();
        assert_eq!(product.implies(&p(0.5), &p(0.25)).unwrap(), p(0.5));
        assert_eq!(product.implies(&p(0.0), &p(0.0)).unwrap(), p(1.0));
        let sproduct = TruthAlgebra::sproduct();
        assert_eq!(sproduct.implies(&p(0.5), &p(0.25)).unwrap(), p(0.625));
    }

    #[test]
    fn connective_examples() {
        let b = TruthAlgebra::boolean();
        assert_eq!(b.conj(&TruthValue::B2(true), &TruthValue::B2(false)).unwrap(), TruthValue::B2(false));
        assert_eq!(TruthAlgebra::product().conj(&p(0.5), &p(0.4)).unwrap(), p(0.2));
        let priest = TruthAlgebra::priest();
        let lp = TruthValue::Lp3;
        assert_eq!(priest.neg(&lp(Lp3::B)).unwrap(), lp(Lp3::B));
        assert_eq!(priest.conj(&lp(Lp3::B), &lp(Lp3::T)).unwrap(), lp(Lp3::B));
    }

    #[test]
    fn product_negation_is_residual() {
        let a = TruthAlgebra::product();
        assert_eq!(a.neg(&p(0.0)).unwrap(), p(1.0));
        assert_eq!(a.neg(&p(0.3)).unwrap(), p(0.0));
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(a.neg(&p(x)).unwrap(), a.implies(&p(x), &p(0.0)).unwrap());
        }
    }

    #[test]
    fn priest_negation_matches_piecewise_rule() {
        // F <-> T and B fixed, checked against the involution 1 - x on {0, 1/2, 1}.
        let a = TruthAlgebra::priest();
        let as_num = |v: Lp3| match v {
            Lp3::F => 0.0,
            Lp3::B => 0.5,
            Lp3::T => 1.0,
        };
        for v in Lp3::ALL {
            let TruthValue::Lp3(n) = a.neg(&TruthValue::Lp3(v)).unwrap() else { panic!() };
            assert_eq!(as_num(n), 1.0 - as_num(v));
        }
    }

    #[test]
    fn selection_strings() {
        assert_eq!(parse_algebra("ltn:p=2").unwrap().kind(), AlgebraKind::LtnP { p: 2.0 });
        assert_eq!(parse_algebra("ltnq:q=0.75").unwrap().kind(), AlgebraKind::LtnQ { q: 0.75 });
        assert_eq!(parse_algebra("stl:r=10").unwrap().kind(), AlgebraKind::StlR { r: 10.0 });
        for name in ["boolean", "priest", "product", "sproduct", "ltn:p=3", "ltnq:q=0.5", "stl:r=1.5"] {
            let a = parse_algebra(name).unwrap();
            assert_eq!(parse_algebra(&a.name()).unwrap(), a);
        }
        assert!(matches!(parse_algebra("godel"), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(parse_algebra("ltn:p=0.5"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(parse_algebra("ltnq:q=2"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(parse_algebra("stl:r=0"), Err(Error::ParamOutOfRange(_))));
        assert!(matches!(parse_algebra("ltn"), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn carrier_and_arity_errors() {
        let a = TruthAlgebra::product();
        assert!(matches!(a.conj(&TruthValue::B2(true), &p(0.5)), Err(Error::CarrierMismatch(_))));
        assert!(matches!(
            a.apply_connective(Connective::Conj, &[p(0.5)]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn stl_constants_and_connectives() {
        let a = parse_algebra("stl:r=5").unwrap();
        let x = TruthValue::XReal;
        assert_eq!(a.top(), x(f64::INFINITY));
        assert_eq!(a.neg(&x(2.0)).unwrap(), x(-2.0));
        assert_eq!(a.conj(&x(3.0), &x(3.0)).unwrap(), x(3.0));
        assert_eq!(a.monoid_disj(&x(1.0), &x(2.0)).unwrap(), x(3.0));
        assert_eq!(a.monoid_conj(&x(2.0), &x(4.0)).unwrap(), x(8.0));
    }
}
