use super::{Symbol, Term};

/// Nameless form of a term: bound variables become de Bruijn indices.
/// Two terms are α-equivalent iff their keys are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphaKey {
    Bound(u32),
    Free(Symbol),
    Const(Symbol),
    Abs(Box<AlphaKey>),
    App(Box<AlphaKey>, Box<AlphaKey>),
    Choice(Box<AlphaKey>, Box<AlphaKey>),
}

impl AlphaKey {
    pub fn of(t: &Term) -> AlphaKey {
        build(t, &mut Vec::new())
    }
}

fn build<'a>(t: &'a Term, scope: &mut Vec<&'a Symbol>) -> AlphaKey {
    match t {
        Term::Var(x) => match scope.iter().rev().position(|b| *b == x) {
            Some(i) => AlphaKey::Bound(i as u32),
            None => AlphaKey::Free(x.clone()),
        },
        Term::Const(c) => AlphaKey::Const(c.clone()),
        Term::Abs { binder, body } => {
            scope.push(binder);
            let k = build(body, scope);
            scope.pop();
            AlphaKey::Abs(Box::new(k))
        }
        Term::App { fun, arg } => {
            AlphaKey::App(Box::new(build(fun, scope)), Box::new(build(arg, scope)))
        }
        Term::Choice { left, right } => {
            AlphaKey::Choice(Box::new(build(left, scope)), Box::new(build(right, scope)))
        }
    }
}

/// Structural comparison under two binder environments, without allocating keys.
pub(super) fn alpha_eq(t: &Term, u: &Term) -> bool {
    eq(t, u, &mut Vec::new(), &mut Vec::new())
}

fn eq<'a>(t: &'a Term, u: &'a Term, lt: &mut Vec<&'a Symbol>, lu: &mut Vec<&'a Symbol>) -> bool {
    match (t, u) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = lt.iter().rev().position(|b| *b == x);
            let iy = lu.iter().rev().position(|b| *b == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Const(a), Term::Const(b)) => a == b,
        (
            Term::Abs {
                binder: x,
                body: b1,
            },
            Term::Abs {
                binder: y,
                body: b2,
            },
        ) => {
            lt.push(x);
            lu.push(y);
            let r = eq(b1, b2, lt, lu);
            lt.pop();
            lu.pop();
            r
        }
        (Term::App { fun: f1, arg: a1 }, Term::App { fun: f2, arg: a2 })
        | (
            Term::Choice {
                left: f1,
                right: a1,
            },
            Term::Choice {
                left: f2,
                right: a2,
            },
        ) => eq(f1, f2, lt, lu) && eq(a1, a2, lt, lu),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use crate::term::parse;

    fn aeq(a: &str, b: &str) -> bool {
        parse(a).unwrap().alpha_eq(&parse(b).unwrap())
    }

    #[test]
    fn renaming_bound_variables() {
        assert!(aeq("λx.x", "λy.y"));
        assert!(!aeq("λx.x", "λx.y"));
        assert!(aeq("λx.λy.x y", "λy.λx.y x"));
    }

    #[test]
    fn free_names_matter() {
        assert!(!aeq("x", "y"));
        assert!(!aeq("λx.y", "λx.x"));
        assert!(!aeq("λy.x", "λx.x"));
    }

    #[test]
    fn shadowing() {
        assert!(aeq("λx.λx.x", "λa.λb.b"));
        assert!(!aeq("λx.λx.x", "λa.λb.a"));
    }

    #[test]
    fn key_agrees_with_comparison() {
        let pairs = [
            ("λx.λy.x y", "λy.λx.y x"),
            ("λx.x", "λx.y"),
            ("(λx.x) (+) y", "(λz.z) (+) y"),
        ];
        for (a, b) in pairs {
            let (ta, tb) = (parse(a).unwrap(), parse(b).unwrap());
            assert_eq!(
                ta.alpha_eq(&tb),
                ta.alpha_key() == tb.alpha_key(),
                "{a} vs {b}"
            );
        }
    }
}
