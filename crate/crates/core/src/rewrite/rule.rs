use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{fresh_name, Symbol, Term, FIX_Y, FIX_Z, OPLUS};

/// Built-in root rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Beta,
    BetaV,
    Oplus,
    Sigma1,
    Sigma3,
    Y,
    Z,
    Eta,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown rule `{0}` (known: beta, betav, oplus, sigma1, sigma3, Y, Z, eta)")]
pub struct UnknownRule(pub String);

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::Beta,
        Rule::BetaV,
        Rule::Oplus,
        Rule::Sigma1,
        Rule::Sigma3,
        Rule::Y,
        Rule::Z,
        Rule::Eta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::BetaV => "betav",
            Rule::Oplus => "oplus",
            Rule::Sigma1 => "sigma1",
            Rule::Sigma3 => "sigma3",
            Rule::Y => "Y",
            Rule::Z => "Z",
            Rule::Eta => "eta",
        }
    }

    pub fn from_name(s: &str) -> Result<Rule, UnknownRule> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }

    /// Rules whose side conditions talk about values; substitutivity for
    /// them is checked against value substituends.
    pub fn is_call_by_value(self) -> bool {
        matches!(self, Rule::BetaV | Rule::Sigma3 | Rule::Z)
    }

    /// All root reducts of `t`, deduplicated up to α. Empty when `t` is not a redex.
    pub fn apply(self, t: &Term) -> Vec<Term> {
        let mut out = Vec::new();
        match self {
            Rule::Beta | Rule::BetaV => {
                if let Term::App { fun, arg } = t {
                    if let Term::Abs { binder, body } = fun.as_ref() {
                        if self == Rule::Beta || arg.is_value() {
                            out.push(body.subst(binder, arg));
                        }
                    }
                }
            }
            Rule::Oplus => {
                if let Term::App { fun, arg: right } = t {
                    if let Term::App { fun: op, arg: left } = fun.as_ref() {
                        if is_const(op, OPLUS) {
                            out.push((**left).clone());
                            if !left.alpha_eq(right) {
                                out.push((**right).clone());
                            }
                        }
                    }
                }
            }
            Rule::Sigma1 => {
                // (λx.t) u s  ↦  (λx.t s) u
                if let Term::App { fun, arg: s } = t {
                    if let Term::App { fun: lam, arg: u } = fun.as_ref() {
                        if let Term::Abs { binder, body } = lam.as_ref() {
                            let (x, body) = avoid(binder, body, s);
                            out.push(Term::app(
                                Term::abs_sym(x, Term::app(body, (**s).clone())),
                                (**u).clone(),
                            ));
                        }
                    }
                }
            }
            Rule::Sigma3 => {
                // v ((λx.t) u)  ↦  (λx.v t) u
                if let Term::App { fun: v, arg } = t {
                    if v.is_value() {
                        if let Term::App { fun: lam, arg: u } = arg.as_ref() {
                            if let Term::Abs { binder, body } = lam.as_ref() {
                                let (x, body) = avoid(binder, body, v);
                                out.push(Term::app(
                                    Term::abs_sym(x, Term::app((**v).clone(), body)),
                                    (**u).clone(),
                                ));
                            }
                        }
                    }
                }
            }
            Rule::Y => {
                if let Term::App { fun, arg } = t {
                    if is_const(fun, FIX_Y) {
                        out.push(Term::app((**arg).clone(), t.clone()));
                    }
                }
            }
            Rule::Z => {
                if let Term::App { fun, arg } = t {
                    if is_const(fun, FIX_Z) && arg.is_value() {
                        let fv = arg.free_vars();
                        let x = if fv.contains(&Symbol::new("x")) {
                            fresh_name(&Symbol::new("x"), |s| fv.contains(s))
                        } else {
                            Symbol::new("x")
                        };
                        let inner = Term::apps((**arg).clone(), [t.clone(), Term::Var(x.clone())]);
                        out.push(Term::abs_sym(x, inner));
                    }
                }
            }
            Rule::Eta => {
                if let Term::Abs { binder, body } = t {
                    if let Term::App { fun, arg } = body.as_ref() {
                        if matches!(arg.as_ref(), Term::Var(y) if y == binder)
                            && !fun.occurs_free(binder)
                        {
                            out.push((**fun).clone());
                        }
                    }
                }
            }
        }
        out
    }
}

fn is_const(t: &Term, name: &str) -> bool {
    matches!(t, Term::Const(c) if c.as_str() == name)
}

/// Renames the binder `x` of `body` away from the free variables of `other`
/// when needed, so that σ side conditions hold modulo α.
fn avoid(x: &Symbol, body: &Term, other: &Term) -> (Symbol, Term) {
    if !other.occurs_free(x) {
        return (x.clone(), body.clone());
    }
    let fv_other = other.free_vars();
    let fresh = fresh_name(x, |s| fv_other.contains(s) || body.occurs_free(s));
    let renamed = body.subst(x, &Term::Var(fresh.clone()));
    (fresh, renamed)
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::from_name(s)
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Rule::from_name(&s).map_err(serde::de::Error::custom)
    }
}

/// Root reducts of `t` under `rule`.
pub fn root_apply(rule: Rule, t: &Term) -> Vec<Term> {
    rule.apply(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn apply(rule: Rule, t: &str) -> Vec<String> {
        rule.apply(&parse(t).unwrap())
            .iter()
            .map(|t| t.to_string())
            .collect()
    }

    #[test]
    fn beta_and_betav() {
        assert_eq!(apply(Rule::Beta, "(λx.x x) (y z)"), ["y z (y z)"]);
        assert!(apply(Rule::BetaV, "(λx.x) (y z)").is_empty());
        assert_eq!(apply(Rule::BetaV, "(λx.x) y"), ["y"]);
        assert!(apply(Rule::Beta, "x y").is_empty());
    }

    #[test]
    fn oplus_yields_both_branches() {
        assert_eq!(apply(Rule::Oplus, "oplus p q"), ["p", "q"]);
        assert_eq!(apply(Rule::Oplus, "oplus p p"), ["p"]);
        assert!(apply(Rule::Oplus, "oplus p").is_empty());
        assert!(apply(Rule::Oplus, "oplus p q r").is_empty());
    }

    #[test]
    fn fixpoints() {
        assert_eq!(apply(Rule::Y, "Y p"), ["p (Y p)"]);
        assert_eq!(apply(Rule::Z, "Z (λy.y)"), ["λx.(λy.y) (Z (λy.y)) x"]);
        assert!(apply(Rule::Z, "Z (y y)").is_empty());
        let r = Rule::Z.apply(&parse("Z x").unwrap());
        assert!(r[0].alpha_eq(&parse("λa.x (Z x) a").unwrap()));
    }

    #[test]
    fn sigma_rules() {
        assert_eq!(apply(Rule::Sigma1, "(λx.x) u s"), ["(λx.x s) u"]);
        assert_eq!(apply(Rule::Sigma3, "v ((λx.x) u)"), ["(λx.v x) u"]);
        assert!(apply(Rule::Sigma3, "(v w) ((λx.x) u)").is_empty());
        // The binder is renamed when it clashes with the moved term.
        let r = Rule::Sigma1.apply(&parse("(λx.x) u x").unwrap());
        assert!(r[0].alpha_eq(&parse("(λa.a x) u").unwrap()), "{}", r[0]);
        let r = Rule::Sigma3.apply(&parse("x ((λx.x) u)").unwrap());
        assert!(r[0].alpha_eq(&parse("(λa.x a) u").unwrap()), "{}", r[0]);
    }

    #[test]
    fn eta_side_condition() {
        assert_eq!(apply(Rule::Eta, "λx.y x"), ["y"]);
        assert!(apply(Rule::Eta, "λx.x x").is_empty());
        assert!(apply(Rule::Eta, "λx.y z").is_empty());
    }

    #[test]
    fn names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_name(r.name()).unwrap(), r);
            let json = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Rule>(&json).unwrap(), r);
        }
        assert!(Rule::from_name("gamma").is_err());
    }
}
