//! Canonical text form.
//!
//! ```text
//! term   ::= λ ident+ . term | choice
//! choice ::= app [ (+) term ]
//! app    ::= atom+ [ λ-term ]
//! atom   ::= ident | #ident | ⊕ | ( term )
//! ```
//!
//! `\` may stand for `λ`. Bare identifiers are variables unless they belong
//! to the parser's constant set (by default `oplus`, `Y`, `Z`); `#name`
//! always denotes a constant and `⊕` is `oplus`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Symbol, Term, FIX_Y, FIX_Z, OPLUS};

pub const BUILTIN_CONSTANTS: [&str; 3] = [OPLUS, FIX_Y, FIX_Z];

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at offset {offset}")]
    BadChar { ch: char, offset: usize },
    #[error("unexpected {found} at offset {offset}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
        offset: usize,
    },
    #[error("unexpected end of input, expected {expected}")]
    Eof { expected: &'static str },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Choice,
    Ident(String),
    Const(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lambda => f.write_str("`λ`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Choice => f.write_str("`(+)`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Const(s) => write!(f, "constant `#{s}`"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if src[off..].starts_with("(+)") {
            out.push((Tok::Choice, off));
            i += 3;
            continue;
        }
        let tok = match c {
            'λ' | '\\' => Tok::Lambda,
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '⊕' => Tok::Const(OPLUS.to_string()),
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                if j == start {
                    return Err(ParseError::BadChar { ch: c, offset: off });
                }
                let name: String = chars[start..j].iter().map(|p| p.1).collect();
                out.push((Tok::Const(name), off));
                i = j;
                continue;
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                let name: String = chars[i..j].iter().map(|p| p.1).collect();
                out.push((Tok::Ident(name), off));
                i = j;
                continue;
            }
            _ => return Err(ParseError::BadChar { ch: c, offset: off }),
        };
        out.push((tok, off));
        i += 1;
    }
    Ok(out)
}

/// Parser with a configurable set of bare constant names.
#[derive(Debug, Clone)]
pub struct Parser {
    constants: BTreeSet<String>,
}

impl Default for Parser {
    fn default() -> Self {
        Parser {
            constants: BUILTIN_CONSTANTS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Parser {
    pub fn with_constants<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut p = Parser::default();
        p.constants
            .extend(names.into_iter().map(|s| s.as_ref().to_string()));
        p
    }

    pub fn parse(&self, src: &str) -> Result<Term, ParseError> {
        let toks = lex(src)?;
        let mut st = State {
            toks: &toks,
            at: 0,
            constants: &self.constants,
        };
        let t = st.term()?;
        match st.peek() {
            None => Ok(t),
            Some((tok, off)) => Err(ParseError::Unexpected {
                found: tok.to_string(),
                expected: "end of input",
                offset: *off,
            }),
        }
    }
}

pub fn parse(src: &str) -> Result<Term, ParseError> {
    Parser::default().parse(src)
}

struct State<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    constants: &'a BTreeSet<String>,
}

impl State<'_> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.at)
    }

    fn bump(&mut self) -> Option<&(Tok, usize)> {
        let t = self.toks.get(self.at);
        self.at += 1;
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((tok, off)) => ParseError::Unexpected {
                found: tok.to_string(),
                expected,
                offset: *off,
            },
            None => ParseError::Eof { expected },
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        if matches!(self.peek(), Some((Tok::Lambda, _))) {
            return self.lambda();
        }
        let lhs = self.app()?;
        if matches!(self.peek(), Some((Tok::Choice, _))) {
            self.bump();
            let rhs = self.term()?;
            return Ok(Term::choice(lhs, rhs));
        }
        Ok(lhs)
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.bump();
        let mut binders = Vec::new();
        while let Some((Tok::Ident(name), _)) = self.peek() {
            binders.push(name.clone());
            self.bump();
        }
        if binders.is_empty() {
            return Err(self.unexpected("binder"));
        }
        match self.peek() {
            Some((Tok::Dot, _)) => {
                self.bump();
            }
            _ => return Err(self.unexpected("`.`")),
        }
        let body = self.term()?;
        Ok(binders.iter().rev().fold(body, |acc, b| Term::abs(b, acc)))
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some((Tok::Ident(_) | Tok::Const(_) | Tok::LParen, _)) => {
                    let a = self.atom()?;
                    acc = Term::app(acc, a);
                }
                Some((Tok::Lambda, _)) => {
                    let l = self.lambda()?;
                    return Ok(Term::app(acc, l));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        let Some((tok, _)) = self.peek().cloned() else {
            return Err(ParseError::Eof { expected: "term" });
        };
        match tok {
            Tok::Ident(name) => {
                self.bump();
                if self.constants.contains(&name) {
                    Ok(Term::constant(&name))
                } else {
                    Ok(Term::var(&name))
                }
            }
            Tok::Const(name) => {
                self.bump();
                Ok(Term::constant(&name))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                match self.peek() {
                    Some((Tok::RParen, _)) => {
                        self.bump();
                        Ok(t)
                    }
                    _ => Err(self.unexpected("`)`")),
                }
            }
            _ => Err(self.unexpected("term")),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Top,
    Fun,
    Arg,
    ChoiceSide,
}

fn write_const(c: &Symbol, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if BUILTIN_CONSTANTS.contains(&c.as_str()) {
        f.write_str(c.as_str())
    } else {
        write!(f, "#{}", c)
    }
}

pub(super) fn write_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write_in(t, Slot::Top, f)
}

fn write_in(t: &Term, slot: Slot, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let paren = match t {
        Term::Var(_) | Term::Const(_) => false,
        Term::Abs { .. } => slot != Slot::Top,
        Term::App { .. } => slot == Slot::Arg,
        Term::Choice { .. } => slot != Slot::Top,
    };
    if paren {
        f.write_str("(")?;
    }
    match t {
        Term::Var(x) => f.write_str(x.as_str())?,
        Term::Const(c) => write_const(c, f)?,
        Term::Abs { binder, body } => {
            write!(f, "λ{}.", binder)?;
            write_in(body, Slot::Top, f)?;
        }
        Term::App { fun, arg } => {
            write_in(fun, Slot::Fun, f)?;
            f.write_str(" ")?;
            write_in(arg, Slot::Arg, f)?;
        }
        Term::Choice { left, right } => {
            write_in(left, Slot::ChoiceSide, f)?;
            f.write_str(" (+) ")?;
            write_in(right, Slot::ChoiceSide, f)?;
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn application_is_left_associative() {
        let t = parse("x y z").unwrap();
        assert_eq!(
            t,
            Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z"))
        );
    }

    #[test]
    fn lambda_extends_right() {
        let t = parse("λx y.x y").unwrap();
        assert_eq!(
            t,
            Term::abs(
                "x",
                Term::abs("y", Term::app(Term::var("x"), Term::var("y")))
            )
        );
        assert_eq!(parse("\\x.x").unwrap(), parse("λx.x").unwrap());
    }

    #[test]
    fn constants() {
        assert_eq!(parse("oplus").unwrap(), Term::constant(OPLUS));
        assert_eq!(parse("⊕").unwrap(), Term::constant(OPLUS));
        assert_eq!(parse("#c").unwrap(), Term::constant("c"));
        assert_eq!(parse("c").unwrap(), Term::var("c"));
        assert_eq!(
            Parser::with_constants(["c"]).parse("c").unwrap(),
            Term::constant("c")
        );
        assert_eq!(Term::constant("c").to_string(), "#c");
    }

    #[test]
    fn choice_infix() {
        let t = parse("x (+) λy.y").unwrap();
        assert_eq!(
            t,
            Term::choice(Term::var("x"), Term::abs("y", Term::var("y")))
        );
        assert_eq!(t.to_string(), "x (+) (λy.y)");
        let n = parse("(x (+) y) z").unwrap();
        assert_eq!(n.to_string(), "(x (+) y) z");
    }

    #[test]
    fn printing_round_trips() {
        for src in [
            "λx.x x x",
            "(λx.x x x) ((λz.z) z)",
            "oplus p q",
            "(λx.x) (λy.y)",
            "f (g x) (λy.y)",
            "λx.(λz.z) ((λz.z) x)",
            "Y (λf.f)",
            "(a (+) b) (+) (c (+) d)",
        ] {
            let t = parse(src).unwrap();
            let printed = t.to_string();
            assert_eq!(parse(&printed).unwrap(), t, "{src} -> {printed}");
        }
        assert_eq!(parse("λx.x x x").unwrap().to_string(), "λx.x x x");
        assert_eq!(parse("(λx.x)(λy.y)").unwrap().to_string(), "(λx.x) (λy.y)");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("λ.x"), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse("(x"), Err(ParseError::Eof { .. })));
        assert!(matches!(parse("x $"), Err(ParseError::BadChar { .. })));
        assert!(parse("").is_err());
        assert!(parse("x )").is_err());
    }
}
