//! Lambda terms with constants and a binary choice node.
//!
//! Terms use named binders. Equality that matters for rewriting is
//! α-equivalence ([`Term::alpha_eq`]), and hashing goes through
//! [`AlphaKey`], a nameless form computed on demand.

mod alpha;
mod parse;
mod position;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use alpha::AlphaKey;
pub use parse::{parse, ParseError, Parser, BUILTIN_CONSTANTS};
pub use position::{classify, ClassSet, ContextClass, Dir, Position, PositionError};
pub use subst::fresh_name;

/// Name of a constant that denotes non-deterministic choice when fully applied.
pub const OPLUS: &str = "oplus";
/// Call-by-name fixpoint constant.
pub const FIX_Y: &str = "Y";
/// Call-by-value fixpoint constant.
pub const FIX_Z: &str = "Z";

/// Interned-ish identifier, cheap to clone and shareable across threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Symbol::new(&s))
    }
}

/// A term. `Choice` only occurs in the probabilistic calculus; the
/// non-deterministic calculus encodes choice as the constant [`OPLUS`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Term {
    Var(Symbol),
    Const(Symbol),
    Abs { binder: Symbol, body: Box<Term> },
    App { fun: Box<Term>, arg: Box<Term> },
    Choice { left: Box<Term>, right: Box<Term> },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Symbol::new(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Symbol::new(name))
    }

    pub fn abs(binder: &str, body: Term) -> Term {
        Term::Abs {
            binder: Symbol::new(binder),
            body: Box::new(body),
        }
    }

    pub fn abs_sym(binder: Symbol, body: Term) -> Term {
        Term::Abs {
            binder,
            body: Box::new(body),
        }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App {
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }

    /// Left-nested application `head a1 a2 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn choice(left: Term, right: Term) -> Term {
        Term::Choice {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// `oplus t p`, the fully applied choice constant.
    pub fn oplus(left: Term, right: Term) -> Term {
        Term::apps(Term::constant(OPLUS), [left, right])
    }

    /// Node count; every constructor counts one, binders included in their λ node.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Abs { body, .. } => 1 + body.size(),
            Term::App { fun, arg } => 1 + fun.size() + arg.size(),
            Term::Choice { left, right } => 1 + left.size() + right.size(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_))
    }

    pub fn is_abs(&self) -> bool {
        matches!(self, Term::Abs { .. })
    }

    pub fn is_app(&self) -> bool {
        matches!(self, Term::App { .. })
    }

    /// A value is anything but an application or a choice.
    pub fn is_value(&self) -> bool {
        matches!(self, Term::Var(_) | Term::Const(_) | Term::Abs { .. })
    }

    pub fn contains_choice(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => false,
            Term::Abs { body, .. } => body.contains_choice(),
            Term::App { fun, arg } => fun.contains_choice() || arg.contains_choice(),
            Term::Choice { .. } => true,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Abs { binder, body } => {
                bound.push(binder);
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::App { fun: a, arg: b } | Term::Choice { left: a, right: b } => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
        }
    }

    pub fn occurs_free(&self, x: &Symbol) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Const(_) => false,
            Term::Abs { binder, body } => binder != x && body.occurs_free(x),
            Term::App { fun: a, arg: b } | Term::Choice { left: a, right: b } => {
                a.occurs_free(x) || b.occurs_free(x)
            }
        }
    }

    /// Every name occurring in the term, free or bound.
    pub fn all_names(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::Abs { binder, body } => {
                out.insert(binder.clone());
                body.all_names(out);
            }
            Term::App { fun: a, arg: b } | Term::Choice { left: a, right: b } => {
                a.all_names(out);
                b.all_names(out);
            }
        }
    }

    /// Head of an application spine and its arguments, left to right.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App { fun, arg } = cur {
            args.push(arg.as_ref());
            cur = fun;
        }
        args.reverse();
        (cur, args)
    }

    pub fn is_beta_redex(&self) -> bool {
        matches!(self, Term::App { fun, .. } if fun.is_abs())
    }

    pub fn is_betav_redex(&self) -> bool {
        matches!(self, Term::App { fun, arg } if fun.is_abs() && arg.is_value())
    }

    pub fn subst(&self, x: &Symbol, q: &Term) -> Term {
        subst::subst(self, x, q)
    }

    pub fn alpha_key(&self) -> AlphaKey {
        AlphaKey::of(self)
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha::alpha_eq(self, other)
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        pos.resolve(self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        parse::write_term(self, f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self)
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    t.alpha_eq(u)
}

pub fn is_value(t: &Term) -> bool {
    t.is_value()
}

pub fn subst(t: &Term, x: &Symbol, q: &Term) -> Term {
    t.subst(x, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_every_node() {
        let t = parse("λx.(λz.z λz.z) (λz.z x)").unwrap();
        assert_eq!(t.size(), 11);
        assert_eq!(Term::var("x").size(), 1);
    }

    #[test]
    fn values() {
        assert!(parse("λx.x").unwrap().is_value());
        assert!(!parse("(λx.x) (λy.y)").unwrap().is_value());
        assert!(Term::constant("c").is_value());
        assert!(Term::var("x").is_value());
        assert!(!parse("x (+) y").unwrap().is_value());
    }

    #[test]
    fn free_vars_respect_shadowing() {
        let t = parse("λx.x y (λy.y z)").unwrap();
        let fv: Vec<_> = t.free_vars().into_iter().map(|s| s.to_string()).collect();
        assert_eq!(fv, vec!["y", "z"]);
    }

    #[test]
    fn spine_splits_arguments() {
        let t = parse("oplus p q").unwrap();
        let (head, args) = t.spine();
        assert_eq!(head, &Term::constant(OPLUS));
        assert_eq!(args.len(), 2);
    }

    #[test]
    fn json_tree_encoding() {
        let t = parse("λx.x y").unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"abs":{"binder":"x","body":{"app":{"fun":{"var":"x"},"arg":{"var":"y"}}}}}"#
        );
        let back: Term = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
