use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::value::Value;

/// Deterministic built-in functions and comparison predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    Min,
    Max,
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Built-in families of computational symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stochastic {
    Bernoulli,
    Normal,
    UniformReal,
}

impl Builtin {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "add" => Builtin::Add,
            "sub" => Builtin::Sub,
            "mul" => Builtin::Mul,
            "div" => Builtin::Div,
            "neg" => Builtin::Neg,
            "abs" => Builtin::Abs,
            "min" => Builtin::Min,
            "max" => Builtin::Max,
            "eq" => Builtin::Eq,
            "lt" => Builtin::Lt,
            "le" => Builtin::Le,
            "gt" => Builtin::Gt,
            "ge" => Builtin::Ge,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Add => "add",
            Builtin::Sub => "sub",
            Builtin::Mul => "mul",
            Builtin::Div => "div",
            Builtin::Neg => "neg",
            Builtin::Abs => "abs",
            Builtin::Min => "min",
            Builtin::Max => "max",
            Builtin::Eq => "eq",
            Builtin::Lt => "lt",
            Builtin::Le => "le",
            Builtin::Gt => "gt",
            Builtin::Ge => "ge",
        }
    }

    pub fn is_comparison(&self) -> bool {
        matches!(self, Builtin::Eq | Builtin::Lt | Builtin::Le | Builtin::Gt | Builtin::Ge)
    }

    pub fn arity(&self) -> usize {
        match self {
            Builtin::Neg | Builtin::Abs => 1,
            _ => 2,
        }
    }

    /// Applies an arithmetic builtin. Integer arithmetic is exact (overflow
    /// is an error); a real argument widens the operation to reals. `div`
    /// always returns a real.
    pub fn apply(&self, args: &[Value]) -> Result<Value> {
        if self.is_comparison() {
            return self.compare(args).map(Value::Boolean);
        }
        check_arity(self.name(), self.arity(), args.len())?;
        let ints: Option<Vec<i64>> = args
            .iter()
            .map(|a| match a {
                Value::Integer(i) => Some(*i),
                _ => None,
            })
            .collect();
        let reals = args
            .iter()
            .map(|a| a.as_f64().ok_or_else(|| not_numeric(self.name(), a)))
            .collect::<Result<Vec<f64>>>()?;
        if *self == Builtin::Div {
            if reals[1] == 0.0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(Value::Real(reals[0] / reals[1]));
        }
        if let Some(i) = ints {
            let overflow = || Error::Type(format!("integer overflow in {}", self.name()));
            return Ok(Value::Integer(match self {
                Builtin::Add => i[0].checked_add(i[1]).ok_or_else(overflow)?,
                Builtin::Sub => i[0].checked_sub(i[1]).ok_or_else(overflow)?,
                Builtin::Mul => i[0].checked_mul(i[1]).ok_or_else(overflow)?,
                Builtin::Neg => i[0].checked_neg().ok_or_else(overflow)?,
                Builtin::Abs => i[0].checked_abs().ok_or_else(overflow)?,
                Builtin::Min => i[0].min(i[1]),
                Builtin::Max => i[0].max(i[1]),
                _ => unreachable!(),
            }));
        }
        let r = &reals;
        Ok(Value::Real(match self {
            Builtin::Add => r[0] + r[1],
            Builtin::Sub => r[0] - r[1],
            Builtin::Mul => r[0] * r[1],
            Builtin::Neg => -r[0],
            Builtin::Abs => r[0].abs(),
            Builtin::Min => r[0].min(r[1]),
            Builtin::Max => r[0].max(r[1]),
            _ => unreachable!(),
        }))
    }

    /// Evaluates a comparison. Numbers compare numerically across integer
    /// and real; `eq` on other values is structural; ordering needs numbers.
    pub fn compare(&self, args: &[Value]) -> Result<bool> {
        check_arity(self.name(), 2, args.len())?;
        let (a, b) = (&args[0], &args[1]);
        if *self == Builtin::Eq {
            return Ok(a.loose_eq(b));
        }
        let x = a.as_f64().ok_or_else(|| not_numeric(self.name(), a))?;
        let y = b.as_f64().ok_or_else(|| not_numeric(self.name(), b))?;
        let ord = x.partial_cmp(&y);
        Ok(match self {
            Builtin::Lt => ord == Some(Ordering::Less),
            Builtin::Le => matches!(ord, Some(Ordering::Less | Ordering::Equal)),
            Builtin::Gt => ord == Some(Ordering::Greater),
            Builtin::Ge => matches!(ord, Some(Ordering::Greater | Ordering::Equal)),
            _ => return Err(Error::Type(format!("{} is not a comparison", self.name()))),
        })
    }

    /// Signed robustness of a comparison: positive when it holds.
    pub fn robustness(&self, args: &[Value]) -> Result<f64> {
        check_arity(self.name(), 2, args.len())?;
        let x = args[0].as_f64().ok_or_else(|| not_numeric(self.name(), &args[0]))?;
        let y = args[1].as_f64().ok_or_else(|| not_numeric(self.name(), &args[1]))?;
        match self {
            Builtin::Lt | Builtin::Le => Ok(y - x),
            Builtin::Gt | Builtin::Ge => Ok(x - y),
            Builtin::Eq => Ok(-(x - y).abs()),
            _ => Err(Error::Type(format!("{} is not a comparison", self.name()))),
        }
    }
}

impl Stochastic {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "bernoulli" => Stochastic::Bernoulli,
            "normal" => Stochastic::Normal,
            "uniform_real" => Stochastic::UniformReal,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Stochastic::Bernoulli => "bernoulli",
            Stochastic::Normal => "normal",
            Stochastic::UniformReal => "uniform_real",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Stochastic::Bernoulli => 1,
            _ => 2,
        }
    }

    /// Whether the family has finite support.
    pub fn is_finite(&self) -> bool {
        matches!(self, Stochastic::Bernoulli)
    }
}

pub(crate) fn check_arity(symbol: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch { symbol: symbol.to_string(), expected, found })
    }
}

fn not_numeric(op: &str, v: &Value) -> Error {
    Error::Type(format!("{op} needs numeric arguments, got `{v}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let i = Value::Integer;
        assert_eq!(Builtin::Add.apply(&[i(3), i(4)]).unwrap(), i(7));
        assert_eq!(Builtin::Add.apply(&[i(3), Value::Real(0.5)]).unwrap(), Value::Real(3.5));
        assert_eq!(Builtin::Div.apply(&[i(1), i(2)]).unwrap(), Value::Real(0.5));
        assert_eq!(Builtin::Div.apply(&[i(1), i(0)]), Err(Error::DivisionByZero));
        assert_eq!(Builtin::Abs.apply(&[i(-2)]).unwrap(), i(2));
        assert!(matches!(Builtin::Add.apply(&[Value::sym("a"), i(1)]), Err(Error::Type(_))));
        assert!(matches!(Builtin::Add.apply(&[i(i64::MAX), i(1)]), Err(Error::Type(_))));
        assert!(matches!(Builtin::Neg.apply(&[i(1), i(1)]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn comparisons() {
        let i = Value::Integer;
        assert!(Builtin::Eq.compare(&[i(1), Value::Real(1.0)]).unwrap());
        assert!(Builtin::Eq.compare(&[Value::sym("red"), Value::sym("red")]).unwrap());
        assert!(Builtin::Lt.compare(&[Value::Real(-0.3), i(0)]).unwrap());
        assert!(!Builtin::Gt.compare(&[i(3), Value::Real(15.0)]).unwrap());
        assert!(Builtin::Le.compare(&[i(2), i(2)]).unwrap());
        assert!(matches!(Builtin::Lt.compare(&[Value::sym("a"), i(0)]), Err(Error::Type(_))));
        assert_eq!(Builtin::Lt.robustness(&[i(1), i(4)]).unwrap(), 3.0);
        assert_eq!(Builtin::Eq.robustness(&[i(1), i(4)]).unwrap(), -3.0);
    }
}
