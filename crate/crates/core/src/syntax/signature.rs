use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison predicates available in every signature.
///
/// They accept any two arguments of a common sort (numeric literals match
/// every sort). A declared predicate with the same name takes precedence.
pub const COMPARISONS: [&str; 5] = ["eq", "lt", "le", "gt", "ge"];

pub(crate) const KEYWORDS: [&str; 4] = ["forall", "exists", "top", "bot"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuncDecl {
    #[serde(default)]
    pub args: Vec<String>,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredDecl {
    #[serde(default)]
    pub args: Vec<String>,
}

/// A sorted first-order signature with ordinary and computational symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signature {
    #[serde(default)]
    pub sorts: BTreeSet<String>,
    #[serde(default)]
    pub funcs: BTreeMap<String, FuncDecl>,
    #[serde(default)]
    pub mfuncs: BTreeMap<String, FuncDecl>,
    #[serde(default)]
    pub preds: BTreeMap<String, PredDecl>,
    #[serde(default)]
    pub mpreds: BTreeMap<String, PredDecl>,
}

/// How a predicate name resolves in a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredicateRef<'a> {
    Ordinary(&'a PredDecl),
    Computational(&'a PredDecl),
    /// Built-in comparison, polymorphic over a common argument sort.
    Comparison,
}

impl Signature {
    pub fn parse(text: &str) -> Result<Self> {
        parse_signature(text)
    }

    /// Checks name disjointness and that every sort in an arity is declared.
    pub fn validate(&self) -> Result<()> {
        for name in self.funcs.keys() {
            if self.mfuncs.contains_key(name) {
                return Err(Error::DuplicateSymbol(format!(
                    "`{name}` declared as both func and mfunc"
                )));
            }
        }
        for name in self.preds.keys() {
            if self.mpreds.contains_key(name) {
                return Err(Error::DuplicateSymbol(format!(
                    "`{name}` declared as both pred and mpred"
                )));
            }
        }
        let names = self
            .funcs
            .keys()
            .chain(self.mfuncs.keys())
            .chain(self.preds.keys())
            .chain(self.mpreds.keys())
            .chain(self.sorts.iter());
        for name in names {
            if !is_identifier(name) || KEYWORDS.contains(&name.as_str()) {
                return Err(Error::Syntax(format!("`{name}` is not a valid symbol name")));
            }
        }
        let check = |owner: &str, sort: &str| {
            if self.sorts.contains(sort) {
                Ok(())
            } else {
                Err(Error::UnknownSort(format!("`{sort}` used by `{owner}`")))
            }
        };
        for (name, decl) in self.funcs.iter().chain(self.mfuncs.iter()) {
            decl.args.iter().try_for_each(|s| check(name, s))?;
            check(name, &decl.result)?;
        }
        for (name, decl) in self.preds.iter().chain(self.mpreds.iter()) {
            decl.args.iter().try_for_each(|s| check(name, s))?;
        }
        Ok(())
    }

    pub fn func(&self, name: &str) -> Option<&FuncDecl> {
        self.funcs.get(name)
    }

    pub fn mfunc(&self, name: &str) -> Option<&FuncDecl> {
        self.mfuncs.get(name)
    }

    pub fn predicate(&self, name: &str) -> Option<PredicateRef<'_>> {
        if let Some(decl) = self.preds.get(name) {
            Some(PredicateRef::Ordinary(decl))
        } else if let Some(decl) = self.mpreds.get(name) {
            Some(PredicateRef::Computational(decl))
        } else if COMPARISONS.contains(&name) {
            Some(PredicateRef::Comparison)
        } else {
            None
        }
    }

    pub fn is_symbol(&self, name: &str) -> bool {
        self.funcs.contains_key(name)
            || self.mfuncs.contains_key(name)
            || self.preds.contains_key(name)
            || self.mpreds.contains_key(name)
    }
}

/// Parses a signature document (JSON object with `sorts`, `funcs`, `mfuncs`,
/// `preds`, `mpreds`).
pub fn parse_signature(text: &str) -> Result<Signature> {
    let sig: Signature =
        serde_json::from_str(text).map_err(|e| Error::Syntax(format!("signature: {e}")))?;
    sig.validate()?;
    Ok(sig)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_signature() {
        let sig = parse_signature(r#"{"sorts": ["Bool"]}"#).unwrap();
        assert_eq!(sig.sorts.len(), 1);
        assert!(sig.funcs.is_empty() && sig.mfuncs.is_empty());
        assert!(sig.preds.is_empty() && sig.mpreds.is_empty());
    }

    #[test]
    fn mnist_signature() {
        let sig = parse_signature(
            r#"{
                "sorts": ["Digit", "Image"],
                "mfuncs": {"classify": {"args": ["Image"], "result": "Digit"}},
                "funcs": {"add": {"args": ["Digit", "Digit"], "result": "Digit"}},
                "preds": {"eq": {"args": ["Digit", "Digit"]}}
            }"#,
        )
        .unwrap();
        assert_eq!((sig.mfuncs.len(), sig.funcs.len(), sig.preds.len()), (1, 1, 1));
        assert_eq!(sig.mfunc("classify").unwrap().result, "Digit");
    }

    #[test]
    fn func_and_mfunc_must_be_disjoint() {
        let err = parse_signature(
            r#"{"sorts": ["S"],
                "funcs": {"f": {"args": [], "result": "S"}},
                "mfuncs": {"f": {"args": [], "result": "S"}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateSymbol(_)));
    }

    #[test]
    fn pred_and_mpred_must_be_disjoint() {
        let err = parse_signature(
            r#"{"sorts": ["S"], "preds": {"p": {"args": ["S"]}}, "mpreds": {"p": {"args": ["S"]}}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateSymbol(_)));
    }

    #[test]
    fn undeclared_sort() {
        let err = parse_signature(r#"{"sorts": ["S"], "preds": {"p": {"args": ["T"]}}}"#)
            .unwrap_err();
        assert!(matches!(err, Error::UnknownSort(_)));
    }

    #[test]
    fn malformed_document() {
        assert!(matches!(parse_signature("{sorts: ["), Err(Error::Syntax(_))));
        assert!(matches!(
            parse_signature(r#"{"sorts": [], "bogus": 1}"#),
            Err(Error::Syntax(_))
        ));
    }

    #[test]
    fn comparisons_resolve_unless_declared() {
        let sig = parse_signature(r#"{"sorts": ["S"], "preds": {"lt": {"args": ["S", "S"]}}}"#)
            .unwrap();
        assert_eq!(sig.predicate("eq"), Some(PredicateRef::Comparison));
        assert!(matches!(sig.predicate("lt"), Some(PredicateRef::Ordinary(_))));
        assert_eq!(sig.predicate("nope"), None);
    }
}
