use super::{Symbol, Term};

/// `base` with primes appended until `taken` rejects it no more.
pub fn fresh_name(base: &Symbol, taken: impl Fn(&Symbol) -> bool) -> Symbol {
    let mut candidate = format!("{}'", base.as_str());
    loop {
        let sym = Symbol::new(&candidate);
        if !taken(&sym) {
            return sym;
        }
        candidate.push('\'');
    }
}

/// Capture-avoiding `t[x := q]`. Binders are renamed only when a capture
/// would otherwise happen, so results stay readable.
pub(super) fn subst(t: &Term, x: &Symbol, q: &Term) -> Term {
    if !t.occurs_free(x) {
        return t.clone();
    }
    let fv_q = q.free_vars();
    go(t, x, q, &fv_q)
}

fn go(t: &Term, x: &Symbol, q: &Term, fv_q: &std::collections::BTreeSet<Symbol>) -> Term {
    match t {
        Term::Var(y) => {
            if y == x {
                q.clone()
            } else {
                t.clone()
            }
        }
        Term::Const(_) => t.clone(),
        Term::Abs { binder, body } => {
            if binder == x || !body.occurs_free(x) {
                return t.clone();
            }
            if fv_q.contains(binder) {
                let fresh = fresh_name(binder, |s| {
                    s == x || fv_q.contains(s) || body.occurs_free(s)
                });
                let renamed = go(
                    body,
                    binder,
                    &Term::Var(fresh.clone()),
                    &[fresh.clone()].into(),
                );
                Term::abs_sym(fresh, go(&renamed, x, q, fv_q))
            } else {
                Term::abs_sym(binder.clone(), go(body, x, q, fv_q))
            }
        }
        Term::App { fun, arg } => Term::app(go(fun, x, q, fv_q), go(arg, x, q, fv_q)),
        Term::Choice { left, right } => Term::choice(go(left, x, q, fv_q), go(right, x, q, fv_q)),
    }
}

#[cfg(test)]
mod tests {
    use crate::term::{parse, Symbol, Term};

    fn s(t: &str, x: &str, q: &str) -> Term {
        parse(t).unwrap().subst(&Symbol::new(x), &parse(q).unwrap())
    }

    #[test]
    fn identity_case() {
        assert_eq!(s("x", "x", "λz.z w"), parse("λz.z w").unwrap());
    }

    #[test]
    fn capture_forces_renaming() {
        let r = s("λy.x", "x", "y");
        assert!(r.alpha_eq(&parse("λy'.y").unwrap()));
        assert_eq!(r.to_string(), "λy'.y");
    }

    #[test]
    fn choice_distributes() {
        let r = s("(x y) (+) (λz.x)", "x", "w");
        assert_eq!(r, parse("(w y) (+) (λz.w)").unwrap());
    }

    #[test]
    fn shadowed_binder_blocks() {
        assert_eq!(s("λx.x", "x", "y"), parse("λx.x").unwrap());
    }

    #[test]
    fn renaming_avoids_body_names() {
        // y' already free in the body, so the binder must skip it.
        let r = s("λy.x y'", "x", "y");
        assert!(r.alpha_eq(&parse("λa.y y'").unwrap()), "{r}");
    }

    #[test]
    fn nested_capture() {
        let r = s("λy.λz.x y z", "x", "y z");
        assert!(r.alpha_eq(&parse("λa.λb.(y z) a b").unwrap()), "{r}");
    }
}
