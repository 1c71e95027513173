use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde_json::Value as Json;

use crate::error::{Error, Result};
use crate::syntax::Number;

/// An element of some sort's domain.
#[derive(Debug, Clone)]
pub enum Value {
    Boolean(bool),
    Integer(i64),
    /// Compared bit-for-bit; ordered by `f64::total_cmp`.
    Real(f64),
    Symbol(Arc<str>),
}

impl Value {
    pub fn sym(s: &str) -> Self {
        Value::Symbol(s.into())
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Boolean(_) => 0,
            Value::Integer(_) => 1,
            Value::Real(_) => 2,
            Value::Symbol(_) => 3,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Integer(i) => Some(*i as f64),
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    /// Reads `true`/`false` or `1`/`0` as a truth value.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Boolean(b) => Some(*b),
            Value::Integer(0) => Some(false),
            Value::Integer(1) => Some(true),
            _ => None,
        }
    }

    /// Equality that identifies integers with equal reals.
    pub fn loose_eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Integer(_) | Value::Real(_), Value::Integer(_) | Value::Real(_)) => {
                self.as_f64() == other.as_f64()
            }
            _ => self == other,
        }
    }

    pub fn from_number(n: Number) -> Self {
        match n {
            Number::Int(i) => Value::Integer(i),
            Number::Real(x) => Value::Real(x),
        }
    }

    /// Parses a scalar document value.
    pub fn from_json(j: &Json) -> Result<Self> {
        match j {
            Json::Bool(b) => Ok(Value::Boolean(*b)),
            Json::Number(n) => match n.as_i64() {
                Some(i) => Ok(Value::Integer(i)),
                None => n
                    .as_f64()
                    .map(Value::Real)
                    .ok_or_else(|| Error::Schema(format!("number {n} is out of range"))),
            },
            Json::String(s) => Ok(Value::Symbol(s.as_str().into())),
            other => Err(Error::Schema(format!("expected a scalar value, found {other}"))),
        }
    }

    pub fn to_json(&self) -> Json {
        match self {
            Value::Boolean(b) => Json::Bool(*b),
            Value::Integer(i) => Json::from(*i),
            Value::Real(x) if x.is_finite() => Json::from(*x),
            Value::Real(x) => Json::String(if *x > 0.0 { "inf" } else { "-inf" }.into()),
            Value::Symbol(s) => Json::String(s.to_string()),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Boolean(a), Value::Boolean(b)) => a.cmp(b),
            (Value::Integer(a), Value::Integer(b)) => a.cmp(b),
            (Value::Real(a), Value::Real(b)) => a.total_cmp(b),
            (Value::Symbol(a), Value::Symbol(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Boolean(b) => b.hash(state),
            Value::Integer(i) => i.hash(state),
            Value::Real(x) => x.to_bits().hash(state),
            Value::Symbol(s) => s.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Boolean(b) => write!(f, "{b}"),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Real(x) => write!(f, "{x}"),
            Value::Symbol(s) => f.write_str(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_equality_is_bitwise() {
        assert_eq!(Value::Real(0.5), Value::Real(0.5));
        assert_ne!(Value::Real(0.0), Value::Real(-0.0));
        assert_eq!(Value::Real(f64::NAN), Value::Real(f64::NAN));
        assert_ne!(Value::Integer(1), Value::Real(1.0));
        assert!(Value::Integer(1).loose_eq(&Value::Real(1.0)));
    }

    #[test]
    fn json_round_trip() {
        for v in [Value::Boolean(true), Value::Integer(-3), Value::Real(2.5), Value::sym("red")] {
            assert_eq!(Value::from_json(&v.to_json()).unwrap(), v);
        }
        assert!(Value::from_json(&serde_json::json!([1])).is_err());
    }
}
