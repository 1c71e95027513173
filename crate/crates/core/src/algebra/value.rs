use std::fmt;

use crate::effects::{NonEmpty, Sampler};

/// Priest's three truth values, ordered `F < B < T`. `B` is "both".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lp3 {
    F,
    B,
    T,
}

impl Lp3 {
    pub const ALL: [Lp3; 3] = [Lp3::F, Lp3::B, Lp3::T];

    /// `{0} ↦ F`, `{1} ↦ T`, `{0,1} ↦ B`.
    pub fn from_set(s: &NonEmpty<bool>) -> Self {
        match (s.contains(&false), s.contains(&true)) {
            (true, true) => Lp3::B,
            (false, true) => Lp3::T,
            _ => Lp3::F,
        }
    }

    pub fn to_set(self) -> NonEmpty<bool> {
        match self {
            Lp3::F => NonEmpty::singleton(false),
            Lp3::T => NonEmpty::singleton(true),
            Lp3::B => NonEmpty::new(vec![false, true]).expect("two elements"),
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Lp3::T
        } else {
            Lp3::F
        }
    }
}

impl fmt::Display for Lp3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lp3::F => "F",
            Lp3::B => "B",
            Lp3::T => "T",
        })
    }
}

/// An element of `T(Ω)` in the active framework.
#[derive(Debug, Clone)]
pub enum TruthValue {
    B2(bool),
    Lp3(Lp3),
    Prob(f64),
    XReal(f64),
    BoolSampler(Sampler<bool>),
    /// A realised Monte Carlo probability with its standard error.
    Estimate { value: f64, stderr: f64 },
}

/// Which variant of [`TruthValue`] an algebra operates on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Carrier {
    Boolean,
    Lp3,
    Prob,
    XReal,
    BoolSampler,
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Carrier::Boolean => "boolean",
            Carrier::Lp3 => "lp3",
            Carrier::Prob => "probability",
            Carrier::XReal => "extended real",
            Carrier::BoolSampler => "boolean sampler",
        })
    }
}

impl TruthValue {
    pub fn carrier(&self) -> Carrier {
        match self {
            TruthValue::B2(_) => Carrier::Boolean,
            TruthValue::Lp3(_) => Carrier::Lp3,
            TruthValue::Prob(_) | TruthValue::Estimate { .. } => Carrier::Prob,
            TruthValue::XReal(_) => Carrier::XReal,
            TruthValue::BoolSampler(_) => Carrier::BoolSampler,
        }
    }

    /// Numeric reading, where one exists.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            TruthValue::B2(b) => Some(f64::from(u8::from(*b))),
            TruthValue::Prob(p) | TruthValue::XReal(p) => Some(*p),
            TruthValue::Estimate { value, .. } => Some(*value),
            TruthValue::Lp3(_) | TruthValue::BoolSampler(_) => None,
        }
    }

    pub fn stderr(&self) -> Option<f64> {
        match self {
            TruthValue::Estimate { stderr, .. } => Some(*stderr),
            _ => None,
        }
    }
}

impl PartialEq for TruthValue {
    /// Samplers compare equal only when both are the same constant.
    fn eq(&self, other: &Self) -> bool {
        use TruthValue::*;
        match (self, other) {
            (B2(a), B2(b)) => a == b,
            (Lp3(a), Lp3(b)) => a == b,
            (Prob(a), Prob(b)) | (XReal(a), XReal(b)) => a == b,
            (Estimate { value: a, stderr: s }, Estimate { value: b, stderr: t }) => a == b && s == t,
            (BoolSampler(a), BoolSampler(b)) => {
                matches!((a.as_constant(), b.as_constant()), (Some(x), Some(y)) if x == y)
            }
            _ => false,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TruthValue::B2(b) => write!(f, "{b}"),
            TruthValue::Lp3(v) => write!(f, "{v}"),
            TruthValue::Prob(p) | TruthValue::XReal(p) => write!(f, "{p}"),
            TruthValue::Estimate { value, stderr } => write!(f, "{value} ± {stderr}"),
            TruthValue::BoolSampler(s) => match s.as_constant() {
                Some(b) => write!(f, "sampler(const {b})"),
                None => f.write_str("sampler"),
            },
        }
    }
}
