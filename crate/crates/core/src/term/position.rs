use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Term;

/// One descent from a node to a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    #[serde(rename = "body")]
    AbsBody,
    #[serde(rename = "fun")]
    AppFun,
    #[serde(rename = "arg")]
    AppArg,
    #[serde(rename = "left")]
    ChoiceLeft,
    #[serde(rename = "right")]
    ChoiceRight,
}

impl Dir {
    fn label(self) -> &'static str {
        match self {
            Dir::AbsBody => "body",
            Dir::AppFun => "fun",
            Dir::AppArg => "arg",
            Dir::ChoiceLeft => "left",
            Dir::ChoiceRight => "right",
        }
    }
}

/// Path from the root to a context hole.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<Dir>);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("position {pos} does not resolve in {term}")]
pub struct PositionError {
    pub pos: Position,
    pub term: String,
}

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: Dir) -> Position {
        let mut v = self.0.clone();
        v.push(d);
        Position(v)
    }

    pub fn resolve<'a>(&self, t: &'a Term) -> Option<&'a Term> {
        let mut cur = t;
        for d in &self.0 {
            cur = match (d, cur) {
                (Dir::AbsBody, Term::Abs { body, .. }) => body,
                (Dir::AppFun, Term::App { fun, .. }) => fun,
                (Dir::AppArg, Term::App { arg, .. }) => arg,
                (Dir::ChoiceLeft, Term::Choice { left, .. }) => left,
                (Dir::ChoiceRight, Term::Choice { right, .. }) => right,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// `t` with the subterm at this position replaced by `with`.
    pub fn replace(&self, t: &Term, with: Term) -> Option<Term> {
        fn go(t: &Term, path: &[Dir], with: Term) -> Option<Term> {
            let Some((d, rest)) = path.split_first() else {
                return Some(with);
            };
            Some(match (d, t) {
                (Dir::AbsBody, Term::Abs { binder, body }) => {
                    Term::abs_sym(binder.clone(), go(body, rest, with)?)
                }
                (Dir::AppFun, Term::App { fun, arg }) => {
                    Term::app(go(fun, rest, with)?, (**arg).clone())
                }
                (Dir::AppArg, Term::App { fun, arg }) => {
                    Term::app((**fun).clone(), go(arg, rest, with)?)
                }
                (Dir::ChoiceLeft, Term::Choice { left, right }) => {
                    Term::choice(go(left, rest, with)?, (**right).clone())
                }
                (Dir::ChoiceRight, Term::Choice { left, right }) => {
                    Term::choice((**left).clone(), go(right, rest, with)?)
                }
                _ => return None,
            })
        }
        go(t, &self.0, with)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(d.label())?;
        }
        Ok(())
    }
}

/// Families of contexts. `Full` is any context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextClass {
    Head,
    Left,
    Weak,
    Full,
}

impl ContextClass {
    pub fn name(self) -> &'static str {
        match self {
            ContextClass::Head => "head",
            ContextClass::Left => "left",
            ContextClass::Weak => "weak",
            ContextClass::Full => "full",
        }
    }

    fn bit(self) -> u8 {
        match self {
            ContextClass::Head => 1,
            ContextClass::Left => 2,
            ContextClass::Weak => 4,
            ContextClass::Full => 8,
        }
    }
}

impl fmt::Display for ContextClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ContextClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "head" => Ok(ContextClass::Head),
            "left" => Ok(ContextClass::Left),
            "weak" => Ok(ContextClass::Weak),
            "full" => Ok(ContextClass::Full),
            other => Err(format!("unknown context class `{other}`")),
        }
    }
}

/// Set of context classes a hole belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ClassSet(u8);

impl ClassSet {
    /// Classes of the empty context.
    pub const ROOT: ClassSet = ClassSet(1 | 2 | 4 | 8);

    pub fn contains(self, c: ContextClass) -> bool {
        self.0 & c.bit() != 0
    }

    pub fn iter(self) -> impl Iterator<Item = ContextClass> {
        [
            ContextClass::Head,
            ContextClass::Left,
            ContextClass::Weak,
            ContextClass::Full,
        ]
        .into_iter()
        .filter(move |c| self.contains(*c))
    }

    /// Classes after descending from a node of `parent` into `d`, given the
    /// classes of the context reaching `parent`. Head contexts are
    /// `λx1..λxk.[] t1..tn`, so once a function descent happened no more λ
    /// descents are allowed; `head_fun` tracks that.
    pub(crate) fn descend(self, head_fun: bool, parent: &Term, d: Dir) -> (ClassSet, bool) {
        let mut bits = ContextClass::Full.bit();
        let mut now_fun = head_fun;
        match d {
            Dir::AbsBody => {
                if self.contains(ContextClass::Head) && !head_fun {
                    bits |= ContextClass::Head.bit();
                }
            }
            Dir::AppFun => {
                if self.contains(ContextClass::Head) {
                    bits |= ContextClass::Head.bit();
                    now_fun = true;
                }
                if self.contains(ContextClass::Left) {
                    bits |= ContextClass::Left.bit();
                }
                if self.contains(ContextClass::Weak) {
                    bits |= ContextClass::Weak.bit();
                }
            }
            Dir::AppArg => {
                if let Term::App { fun, .. } = parent {
                    if self.contains(ContextClass::Left) && fun.is_value() {
                        bits |= ContextClass::Left.bit();
                    }
                }
                if self.contains(ContextClass::Weak) {
                    bits |= ContextClass::Weak.bit();
                }
            }
            Dir::ChoiceLeft | Dir::ChoiceRight => {}
        }
        (ClassSet(bits), now_fun)
    }
}

impl fmt::Debug for ClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ClassSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ClassSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<ContextClass>::deserialize(d)?;
        Ok(ClassSet(v.into_iter().fold(0, |acc, c| acc | c.bit())))
    }
}

/// Classes whose grammar generates the context `t` with a hole at `pos`.
pub fn classify(t: &Term, pos: &Position) -> Result<ClassSet, PositionError> {
    let mut classes = ClassSet::ROOT;
    let mut head_fun = false;
    let mut cur = t;
    for &d in &pos.0 {
        let next = Position(vec![d])
            .resolve(cur)
            .ok_or_else(|| PositionError {
                pos: pos.clone(),
                term: t.to_string(),
            })?;
        (classes, head_fun) = classes.descend(head_fun, cur, d);
        cur = next;
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn cls(t: &str, path: &[Dir]) -> ClassSet {
        classify(&parse(t).unwrap(), &Position(path.to_vec())).unwrap()
    }

    #[test]
    fn empty_path_is_every_class() {
        let c = cls("x", &[]);
        for k in [
            ContextClass::Head,
            ContextClass::Left,
            ContextClass::Weak,
            ContextClass::Full,
        ] {
            assert!(c.contains(k));
        }
    }

    #[test]
    fn argument_of_value_function() {
        let c = cls("(λx.x x x) ((λz.z) z)", &[Dir::AppArg]);
        assert!(c.contains(ContextClass::Left));
        assert!(c.contains(ContextClass::Weak));
        assert!(!c.contains(ContextClass::Head));
        assert!(c.contains(ContextClass::Full));
    }

    #[test]
    fn argument_of_non_value_is_not_left() {
        let c = cls("(x y) z", &[Dir::AppArg]);
        assert!(!c.contains(ContextClass::Left));
        assert!(c.contains(ContextClass::Weak));
    }

    #[test]
    fn under_lambda_in_function_position_is_head_only() {
        let c = cls(
            "λx.((λz.z) (λz.z)) ((λz.z) x)",
            &[Dir::AbsBody, Dir::AppFun],
        );
        assert!(c.contains(ContextClass::Head));
        assert!(!c.contains(ContextClass::Weak));
        assert!(!c.contains(ContextClass::Left));
        assert!(c.contains(ContextClass::Full));
    }

    #[test]
    fn lambda_after_application_is_not_head() {
        let c = cls("(λx.x y) z", &[Dir::AppFun, Dir::AbsBody]);
        assert!(!c.contains(ContextClass::Head));
    }

    #[test]
    fn choice_branches_are_full_only() {
        let c = cls("x (+) y", &[Dir::ChoiceLeft]);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![ContextClass::Full]);
    }

    #[test]
    fn unresolvable_position_errors() {
        assert!(classify(&parse("x").unwrap(), &Position(vec![Dir::AppFun])).is_err());
    }

    #[test]
    fn replace_and_resolve() {
        let t = parse("λx.(x y) z").unwrap();
        let p = Position(vec![Dir::AbsBody, Dir::AppFun, Dir::AppArg]);
        assert_eq!(p.resolve(&t), Some(&Term::var("y")));
        let r = p.replace(&t, Term::var("w")).unwrap();
        assert_eq!(r, parse("λx.(x w) z").unwrap());
        assert_eq!(p.to_string(), "body.fun.arg");
    }
}
