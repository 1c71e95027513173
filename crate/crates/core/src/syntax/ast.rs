use std::fmt;
use std::sync::Arc;

/// Interned identifier used for symbols, variables and sorts.
pub type Name = Arc<str>;

/// Sort carried by integer literals.
pub const INT_SORT: &str = "Int";
/// Sort carried by real literals.
pub const REAL_SORT: &str = "Real";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Int(i64),
    Real(f64),
}

impl Number {
    pub fn sort(&self) -> &'static str {
        match self {
            Number::Int(_) => INT_SORT,
            Number::Real(_) => REAL_SORT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Variable { name: Name, sort: Name },
    Literal(Number),
    /// Application of an ordinary function symbol; `sort` is its result sort.
    Apply { symbol: Name, args: Vec<Term>, sort: Name },
}

impl Term {
    pub fn var(name: &str, sort: &str) -> Self {
        Term::Variable { name: name.into(), sort: sort.into() }
    }

    pub fn sort(&self) -> &str {
        match self {
            Term::Variable { sort, .. } | Term::Apply { sort, .. } => sort,
            Term::Literal(n) => n.sort(),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// True if `name` occurs as a variable anywhere in the term.
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Variable { name: n, .. } => &**n == name,
            Term::Literal(_) => false,
            Term::Apply { args, .. } => args.iter().any(|a| a.mentions(name)),
        }
    }
}

/// First-order formula with computational bind formulas `[x := m(args)] F`.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Top,
    Bot,
    Prop(Name),
    MProp(Name),
    Atom { pred: Name, args: Vec<Term> },
    MAtom { pred: Name, args: Vec<Term> },
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Forall { var: Name, sort: Name, body: Arc<Formula> },
    Exists { var: Name, sort: Name, body: Arc<Formula> },
    Bind { var: Name, mfunc: Name, args: Vec<Term>, body: Arc<Formula> },
}

impl Formula {
    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Arc::new(f), Arc::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Arc::new(f), Arc::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Arc::new(f), Arc::new(g))
    }

    pub fn forall(var: &str, sort: &str, body: Formula) -> Self {
        Formula::Forall { var: var.into(), sort: sort.into(), body: Arc::new(body) }
    }

    pub fn exists(var: &str, sort: &str, body: Formula) -> Self {
        Formula::Exists { var: var.into(), sort: sort.into(), body: Arc::new(body) }
    }

    pub fn bind(var: &str, mfunc: &str, args: Vec<Term>, body: Formula) -> Self {
        Formula::Bind { var: var.into(), mfunc: mfunc.into(), args, body: Arc::new(body) }
    }

    pub fn atom(pred: &str, args: Vec<Term>) -> Self {
        Formula::Atom { pred: pred.into(), args }
    }

    pub fn free_vars(&self) -> Context {
        free_vars(self)
    }

    /// True if the formula contains no bind, quantifier or computational atom.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Atom { .. } => true,
            Formula::MProp(_)
            | Formula::MAtom { .. }
            | Formula::Forall { .. }
            | Formula::Exists { .. }
            | Formula::Bind { .. } => false,
            Formula::Not(f) => f.is_propositional(),
            Formula::And(f, g) | Formula::Or(f, g) | Formula::Implies(f, g) => {
                f.is_propositional() && g.is_propositional()
            }
        }
    }
}

/// Ordered free variables of a term or formula, by first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context(Vec<(Name, Name)>);

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(n, s)| (&**n, &**s))
    }

    pub fn names(&self) -> Vec<String> {
        self.0.iter().map(|(n, _)| n.to_string()).collect()
    }

    pub fn sort_of(&self, name: &str) -> Option<&str> {
        self.0.iter().find(|(n, _)| &**n == name).map(|(_, s)| &**s)
    }

    fn push(&mut self, name: &Name, sort: &Name) {
        if self.sort_of(name).is_none() {
            self.0.push((name.clone(), sort.clone()));
        }
    }
}

/// Free variables of `f`. Quantifiers and binds remove their variable from
/// the body; a bind's argument terms stay in the outer scope.
pub fn free_vars(f: &Formula) -> Context {
    let mut out = Context::new();
    let mut bound = Vec::new();
    collect_formula(f, &mut bound, &mut out);
    out
}

fn collect_term(t: &Term, bound: &[Name], out: &mut Context) {
    match t {
        Term::Variable { name, sort } => {
            if !bound.contains(name) {
                out.push(name, sort);
            }
        }
        Term::Literal(_) => {}
        Term::Apply { args, .. } => args.iter().for_each(|a| collect_term(a, bound, out)),
    }
}

fn collect_formula(f: &Formula, bound: &mut Vec<Name>, out: &mut Context) {
    match f {
        Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::MProp(_) => {}
        Formula::Atom { args, .. } | Formula::MAtom { args, .. } => {
            args.iter().for_each(|a| collect_term(a, bound, out))
        }
        Formula::Not(g) => collect_formula(g, bound, out),
        Formula::And(g, h) | Formula::Or(g, h) | Formula::Implies(g, h) => {
            collect_formula(g, bound, out);
            collect_formula(h, bound, out);
        }
        Formula::Forall { var, body, .. } | Formula::Exists { var, body, .. } => {
            bound.push(var.clone());
            collect_formula(body, bound, out);
            bound.pop();
        }
        Formula::Bind { var, args, body, .. } => {
            args.iter().for_each(|a| collect_term(a, bound, out));
            bound.push(var.clone());
            collect_formula(body, bound, out);
            bound.pop();
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Int(i) => write!(f, "{i}"),
            // Debug keeps a '.' or exponent so the literal reparses as real.
            Number::Real(x) => write!(f, "{x:?}"),
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable { name, .. } => f.write_str(name),
            Term::Literal(n) => write!(f, "{n}"),
            Term::Apply { symbol, args, .. } if args.is_empty() => f.write_str(symbol),
            Term::Apply { symbol, args, .. } => {
                f.write_str(symbol)?;
                write_args(f, args)
            }
        }
    }
}

/// Fully parenthesised rendering that reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("top"),
            Formula::Bot => f.write_str("bot"),
            Formula::Prop(p) | Formula::MProp(p) => f.write_str(p),
            Formula::Atom { pred, args } | Formula::MAtom { pred, args } => {
                f.write_str(pred)?;
                write_args(f, args)
            }
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Or(g, h) => write!(f, "({g} | {h})"),
            Formula::Implies(g, h) => write!(f, "({g} -> {h})"),
            Formula::Forall { var, sort, body } => write!(f, "(forall {var}:{sort}. {body})"),
            Formula::Exists { var, sort, body } => write!(f, "(exists {var}:{sort}. {body})"),
            Formula::Bind { var, mfunc, args, body } => {
                write!(f, "([{var} := {mfunc}")?;
                write_args(f, args)?;
                write!(f, "] {body})")
            }
        }
    }
}
