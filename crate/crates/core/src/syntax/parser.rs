//! Recursive-descent parser and sort checker for the formula language.
//!
//! Precedence from tightest to loosest: `!`, `&`, `|`, `->`. `&` and `|` are
//! left-associative, `->` is right-associative. Quantifiers and binds extend
//! as far to the right as possible and may appear wherever a unary operand is
//! expected. Unbound identifiers in term position become free variables whose
//! sort is inferred from the argument slot they fill.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::ast::{Formula, Name, Term};
use super::lexer::{tokenize, Tok, Token};
use super::signature::{PredicateRef, Signature};

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    parse_formula_in(text, sig, &[])
}

/// Parses with the sorts of some free variables fixed in advance.
pub fn parse_formula_in(text: &str, sig: &Signature, free: &[(&str, &str)]) -> Result<Formula> {
    for (_, sort) in free {
        if !sig.sorts.contains(*sort) {
            return Err(Error::UnknownSort(sort.to_string()));
        }
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        sig,
        scope: Vec::new(),
        free: free.iter().map(|(n, s)| (Name::from(*n), Name::from(*s))).collect(),
    };
    let formula = parser.formula()?;
    parser.expect(&Tok::Eof, "end of input")?;
    Ok(formula)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    /// Variables bound by enclosing quantifiers and binds, innermost last.
    scope: Vec<(Name, Name)>,
    /// Free variables seen so far with their inferred sorts.
    free: Vec<(Name, Name)>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::Syntax(format!(
            "expected {wanted} at offset {}, found {:?}",
            self.offset(),
            self.peek()
        ))
    }

    fn expect(&mut self, tok: &Tok, wanted: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn peek_keyword(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) if matches!(s.as_str(), "forall" | "exists" | "top" | "bot") => {
                Some(s.as_str())
            }
            _ => None,
        }
    }

    // formula := quant | bind | impl
    fn formula(&mut self) -> Result<Formula> {
        match (self.peek(), self.peek_keyword()) {
            (_, Some("forall" | "exists")) => self.quantifier(),
            (Tok::LBracket, _) => self.bind(),
            _ => self.implication(),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.unary()?));
        }
        match (self.peek(), self.peek_keyword()) {
            (_, Some("forall" | "exists")) => self.quantifier(),
            (Tok::LBracket, _) => self.bind(),
            _ => self.atom(),
        }
    }

    fn check_binder(&self, var: &str) -> Result<()> {
        if self.scope.iter().any(|(n, _)| &**n == var) {
            return Err(Error::ShadowedVariable(format!(
                "`{var}` is already bound by an enclosing binder"
            )));
        }
        if self.sig.is_symbol(var) {
            return Err(Error::ShadowedVariable(format!("`{var}` clashes with a declared symbol")));
        }
        Ok(())
    }

    fn quantifier(&mut self) -> Result<Formula> {
        let universal = self.ident()? == "forall";
        let var = self.ident()?;
        self.expect(&Tok::Colon, "`:`")?;
        let sort = self.ident()?;
        if !self.sig.sorts.contains(&sort) {
            return Err(Error::UnknownSort(sort));
        }
        self.expect(&Tok::Dot, "`.`")?;
        self.check_binder(&var)?;
        self.scope.push((var.as_str().into(), sort.as_str().into()));
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        Ok(if universal {
            Formula::forall(&var, &sort, body)
        } else {
            Formula::exists(&var, &sort, body)
        })
    }

    // bind := "[" assign ("," assign)* "]" formula, desugared left to right
    fn bind(&mut self) -> Result<Formula> {
        self.expect(&Tok::LBracket, "`[`")?;
        let mut assigns = Vec::new();
        let scope_len = self.scope.len();
        let result = (|| {
            loop {
                let var = self.ident()?;
                self.expect(&Tok::Assign, "`:=`")?;
                let mfunc = self.ident()?;
                let decl = match self.sig.mfunc(&mfunc) {
                    Some(d) => d.clone(),
                    None if self.sig.func(&mfunc).is_some() => {
                        return Err(Error::UnknownSymbol(format!(
                            "`{mfunc}` is not a computational function symbol"
                        )))
                    }
                    None => return Err(Error::UnknownSymbol(mfunc)),
                };
                self.expect(&Tok::LParen, "`(`")?;
                let args = self.arguments(&mfunc, &decl.args)?;
                self.check_binder(&var)?;
                if args.iter().any(|a| a.mentions(&var)) {
                    return Err(Error::ShadowedVariable(format!(
                        "bind variable `{var}` occurs in its own arguments"
                    )));
                }
                self.scope.push((var.as_str().into(), decl.result.as_str().into()));
                assigns.push((var, mfunc, args));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBracket, "`]`")?;
            self.formula()
        })();
        self.scope.truncate(scope_len);
        let mut body = result?;
        for (var, mfunc, args) in assigns.into_iter().rev() {
            body = Formula::bind(&var, &mfunc, args, body);
        }
        Ok(body)
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek_keyword() {
            Some("top") => {
                self.bump();
                return Ok(Formula::Top);
            }
            Some("bot") => {
                self.bump();
                return Ok(Formula::Bot);
            }
            _ => {}
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let name = self.ident()?;
        let has_args = self.eat(&Tok::LParen);
        match self.sig.predicate(&name) {
            Some(PredicateRef::Ordinary(decl)) => {
                let args = if has_args { self.arguments(&name, &decl.args)? } else { Vec::new() };
                arity(&name, decl.args.len(), args.len())?;
                Ok(if args.is_empty() {
                    Formula::Prop(name.into())
                } else {
                    Formula::Atom { pred: name.into(), args }
                })
            }
            Some(PredicateRef::Computational(decl)) => {
                let args = if has_args { self.arguments(&name, &decl.args)? } else { Vec::new() };
                arity(&name, decl.args.len(), args.len())?;
                Ok(if args.is_empty() {
                    Formula::MProp(name.into())
                } else {
                    Formula::MAtom { pred: name.into(), args }
                })
            }
            Some(PredicateRef::Comparison) => {
                if !has_args {
                    return Err(Error::ArityMismatch { symbol: name, expected: 2, found: 0 });
                }
                self.comparison(name)
            }
            None if self.sig.func(&name).is_some() || self.sig.mfunc(&name).is_some() => Err(
                Error::UnknownSymbol(format!("`{name}` is a function symbol, not a predicate")),
            ),
            None => Err(Error::UnknownSymbol(name)),
        }
    }

    /// Parses `t1, ..., tn )` against the expected argument sorts.
    fn arguments(&mut self, symbol: &str, sorts: &[String]) -> Result<Vec<Term>> {
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                let expected = sorts.get(args.len()).map(String::as_str);
                if expected.is_none() {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.to_string(),
                        expected: sorts.len(),
                        found: args.len() + 1,
                    });
                }
                args.push(self.term(expected)?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "`)`")?;
        }
        arity(symbol, sorts.len(), args.len())?;
        Ok(args)
    }

    /// Comparison arguments share a sort, inferred from whichever side fixes it.
    fn comparison(&mut self, name: String) -> Result<Formula> {
        let first = self.term(None)?;
        self.expect(&Tok::Comma, "`,`")?;
        let second_expected = match &first {
            Term::Literal(_) => None,
            t if t.sort().is_empty() => None,
            t => Some(t.sort().to_string()),
        };
        let second = self.term(second_expected.as_deref())?;
        if self.peek() == &Tok::Comma {
            return Err(Error::ArityMismatch { symbol: name, expected: 2, found: 3 });
        }
        self.expect(&Tok::RParen, "`)`")?;
        let first = match first {
            Term::Variable { name: var, sort } if sort.is_empty() => {
                if second.sort().is_empty() || second.is_literal() {
                    return Err(Error::SortMismatch(format!(
                        "cannot infer the sort of `{var}` in `{name}`"
                    )));
                }
                let sort: Name = second.sort().into();
                self.register_free(&var, &sort)?;
                Term::Variable { name: var, sort }
            }
            t => t,
        };
        if second.sort().is_empty() {
            return Err(Error::SortMismatch(format!("cannot infer the sort of `{second}` in `{name}`")));
        }
        Ok(Formula::Atom { pred: name.into(), args: vec![first, second] })
    }

    fn register_free(&mut self, name: &Name, sort: &Name) -> Result<()> {
        match self.free.iter().find(|(n, _)| n == name) {
            Some((_, s)) if s != sort => Err(Error::SortMismatch(format!(
                "free variable `{name}` used at sorts `{s}` and `{sort}`"
            ))),
            Some(_) => Ok(()),
            None => {
                self.free.push((name.clone(), sort.clone()));
                Ok(())
            }
        }
    }

    /// `expected = None` leaves an unseen bare identifier with an empty sort
    /// for the caller to resolve.
    fn term(&mut self, expected: Option<&str>) -> Result<Term> {
        let term = match self.bump() {
            Tok::Num(n) => return Ok(Term::Literal(n)),
            Tok::Ident(name) if self.peek() == &Tok::LParen => {
                self.bump();
                let decl = match self.sig.func(&name) {
                    Some(d) => d.clone(),
                    None if self.sig.mfunc(&name).is_some() => {
                        return Err(Error::UnknownSymbol(format!(
                            "computational function `{name}` may only appear in a bind"
                        )))
                    }
                    None => return Err(Error::UnknownSymbol(name)),
                };
                let args = self.arguments(&name, &decl.args)?;
                Term::Apply { symbol: name.into(), args, sort: decl.result.as_str().into() }
            }
            Tok::Ident(name) => self.bare_identifier(name, expected)?,
            other => {
                return Err(Error::Syntax(format!("expected a term, found {other:?}")));
            }
        };
        if let Some(want) = expected {
            if !term.sort().is_empty() && term.sort() != want {
                return Err(Error::SortMismatch(format!(
                    "`{term}` has sort `{}` but `{want}` is expected",
                    term.sort()
                )));
            }
        }
        Ok(term)
    }

    fn bare_identifier(&mut self, name: String, expected: Option<&str>) -> Result<Term> {
        if let Some((n, sort)) = self.scope.iter().rev().find(|(n, _)| **n == *name) {
            return Ok(Term::Variable { name: n.clone(), sort: sort.clone() });
        }
        if let Some(decl) = self.sig.func(&name) {
            arity(&name, decl.args.len(), 0)?;
            return Ok(Term::Apply { symbol: name.into(), args: Vec::new(), sort: decl.result.as_str().into() });
        }
        if self.sig.is_symbol(&name) {
            return Err(Error::UnknownSymbol(format!("`{name}` cannot be used as a term")));
        }
        let name: Name = name.into();
        if let Some((_, sort)) = self.free.iter().find(|(n, _)| *n == name) {
            return Ok(Term::Variable { name, sort: sort.clone() });
        }
        match expected {
            Some(sort) => {
                let sort: Name = Arc::from(sort);
                self.register_free(&name, &sort)?;
                Ok(Term::Variable { name, sort })
            }
            None => Ok(Term::Variable { name, sort: "".into() }),
        }
    }
}

fn arity(symbol: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch { symbol: symbol.to_string(), expected, found })
    }
}
