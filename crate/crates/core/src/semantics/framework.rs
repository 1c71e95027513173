use std::fmt;

use crate::algebra::{lift_algebra, parse_algebra, AlgebraKind, TruthAlgebra};
use crate::effects::MonadKind;
use crate::error::{Error, Result};

/// A monad paired with a truth algebra.
///
/// Under the sampler monad, connectives are the lifted Boolean operations
/// and `algebra` only supplies the quantifier aggregators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Framework {
    monad: MonadKind,
    algebra: TruthAlgebra,
    connectives: TruthAlgebra,
}

/// Accepted algebras per monad, as printed by `--help`.
pub const COMPATIBILITY: &str = "\
classical -> boolean
lp        -> priest
dist      -> product | sproduct | ltn:p=<p> | ltnq:q=<q> | stl:r=<r>
sampler   -> lifted boolean connectives; aggregators product | sproduct | ltn:p=<p> | ltnq:q=<q>";

impl Framework {
    /// Pairs `monad` with `algebra`, or with the monad's default algebra.
    pub fn new(monad: MonadKind, algebra: Option<TruthAlgebra>) -> Result<Self> {
        let algebra = algebra.unwrap_or_else(|| default_algebra(monad));
        let ok = match (monad, algebra.kind()) {
            (MonadKind::Identity, AlgebraKind::Boolean) => true,
            (MonadKind::NonEmptySet, AlgebraKind::Priest) => true,
            (MonadKind::Distribution, k) => product_family(k) || matches!(k, AlgebraKind::StlR { .. }),
            (MonadKind::Sampler, k) => product_family(k),
            _ => false,
        };
        if !ok {
            return Err(Error::IncompatibleFramework(format!(
                "algebra `{}` cannot be used with the {} monad; accepted pairs:\n{COMPATIBILITY}",
                algebra.name(),
                monad.cli_name()
            )));
        }
        let connectives = match monad {
            MonadKind::Sampler => lift_algebra(&TruthAlgebra::boolean(), MonadKind::Sampler)?,
            _ => algebra,
        };
        Ok(Framework { monad, algebra, connectives })
    }

    /// Parses CLI selection strings such as `dist` and `ltn:p=2`.
    pub fn parse(monad: &str, algebra: Option<&str>) -> Result<Self> {
        let monad: MonadKind = monad.parse()?;
        let algebra = algebra.map(parse_algebra).transpose()?;
        Framework::new(monad, algebra)
    }

    pub fn monad(&self) -> MonadKind {
        self.monad
    }

    /// The algebra providing the aggregators (and, outside the sampler
    /// monad, the connectives).
    pub fn algebra(&self) -> &TruthAlgebra {
        &self.algebra
    }

    pub fn connectives(&self) -> &TruthAlgebra {
        &self.connectives
    }

    pub fn is_stl(&self) -> bool {
        matches!(self.algebra.kind(), AlgebraKind::StlR { .. })
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.monad.cli_name(), self.algebra.name())
    }
}

pub fn default_algebra(monad: MonadKind) -> TruthAlgebra {
    match monad {
        MonadKind::Identity => TruthAlgebra::boolean(),
        MonadKind::NonEmptySet => TruthAlgebra::priest(),
        MonadKind::Distribution | MonadKind::Sampler => TruthAlgebra::product(),
    }
}

fn product_family(k: AlgebraKind) -> bool {
    matches!(
        k,
        AlgebraKind::Product | AlgebraKind::SProduct | AlgebraKind::LtnP { .. } | AlgebraKind::LtnQ { .. }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compatibility_table() {
        assert!(Framework::parse("classical", Some("boolean")).is_ok());
        assert!(Framework::parse("lp", None).is_ok());
        assert!(Framework::parse("dist", Some("stl:r=2")).is_ok());
        assert!(Framework::parse("sampler", Some("ltn:p=2")).is_ok());
        for (m, a) in [("classical", "product"), ("lp", "boolean"), ("dist", "priest"), ("sampler", "stl:r=1")] {
            assert!(matches!(Framework::parse(m, Some(a)), Err(Error::IncompatibleFramework(_))), "{m} {a}");
        }
        let fw = Framework::parse("sampler", None).unwrap();
        assert_eq!(fw.connectives().kind(), AlgebraKind::Lifted(MonadKind::Sampler));
        assert_eq!(fw.algebra().kind(), AlgebraKind::Product);
    }
}
