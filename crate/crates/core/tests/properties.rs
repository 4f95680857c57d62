use std::collections::HashMap;

use proptest::prelude::*;

use factorlab::calculi::catalog;
use factorlab::factor::{is_factorized, reorder_sequence, replay_to, Ars, Reordered, TermView};
use factorlab::gen::{enumerate, CorpusSpec, Enumerator, Grammar};
use factorlab::prob::{lift, LiftRel, MultiDist, Prob};
use factorlab::rewrite::{
    enumerate_steps, essential_steps, inessential_steps, Calculus, Rule, StepFilter,
};
use factorlab::term::{classify, parse, ContextClass, Dir, Position, Symbol, Term};

fn enumerator(max: usize, grammar: Grammar) -> Enumerator {
    Enumerator::new(&CorpusSpec::exhaustive(max, &["y", "z"], grammar)).unwrap()
}

fn term_from(max: usize, grammar: Grammar) -> impl Strategy<Value = Term> {
    let e = enumerator(max, grammar);
    let total = e.total() as u64;
    (0..total).prop_map(move |i| e.term_at(i as u128).unwrap())
}

fn lambda_term() -> impl Strategy<Value = Term> {
    term_from(9, Grammar::Lambda)
}

/// Renames every binder to a fresh `bN`, leaving free names alone.
fn alpha_variant(t: &Term) -> Term {
    fn go(t: &Term, env: &mut Vec<(Symbol, Symbol)>, n: &mut usize) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(o, _)| o == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Abs { binder, body } => {
                *n += 1;
                let fresh = Symbol::new(&format!("b{n}"));
                env.push((binder.clone(), fresh.clone()));
                let b = go(body, env, n);
                env.pop();
                Term::abs_sym(fresh, b)
            }
            Term::App { fun, arg } => Term::app(go(fun, env, n), go(arg, env, n)),
            Term::Choice { left, right } => Term::choice(go(left, env, n), go(right, env, n)),
        }
    }
    go(t, &mut Vec::new(), &mut 0)
}

/// Nameless rendering, written independently of the library's α-keys.
fn de_bruijn(t: &Term) -> String {
    fn go(t: &Term, env: &mut Vec<Symbol>, out: &mut String) {
        match t {
            Term::Var(x) => match env.iter().rev().position(|b| b == x) {
                Some(i) => out.push_str(&format!("#{i}")),
                None => out.push_str(x.as_str()),
            },
            Term::Const(c) => out.push_str(&format!("'{}", c.as_str())),
            Term::Abs { binder, body } => {
                out.push_str("(L ");
                env.push(binder.clone());
                go(body, env, out);
                env.pop();
                out.push(')');
            }
            Term::App { fun, arg } => {
                out.push('(');
                go(fun, env, out);
                out.push(' ');
                go(arg, env, out);
                out.push(')');
            }
            Term::Choice { left, right } => {
                out.push_str("(+ ");
                go(left, env, out);
                out.push(' ');
                go(right, env, out);
                out.push(')');
            }
        }
    }
    let mut s = String::new();
    go(t, &mut Vec::new(), &mut s);
    s
}

fn positions(t: &Term) -> Vec<Position> {
    fn go(t: &Term, here: &mut Vec<Dir>, out: &mut Vec<Position>) {
        out.push(Position(here.clone()));
        let kids: Vec<(Dir, &Term)> = match t {
            Term::Abs { body, .. } => vec![(Dir::AbsBody, body)],
            Term::App { fun, arg } => vec![(Dir::AppFun, fun), (Dir::AppArg, arg)],
            Term::Choice { left, right } => {
                vec![(Dir::ChoiceLeft, left), (Dir::ChoiceRight, right)]
            }
            _ => vec![],
        };
        for (d, k) in kids {
            here.push(d);
            go(k, here, out);
            here.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn calculi() -> Vec<Calculus> {
    let mut v: Vec<Calculus> = catalog().into_iter().map(|e| e.calculus).collect();
    v.push(Calculus::new(
        "betav-left",
        &[Rule::BetaV, Rule::Sigma1, Rule::Sigma3],
        ContextClass::Left,
    ));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn alpha_variants_are_equal(t in lambda_term()) {
        let u = alpha_variant(&t);
        prop_assert!(t.alpha_eq(&u));
        prop_assert_eq!(t.alpha_key(), u.alpha_key());
        prop_assert_eq!(de_bruijn(&t), de_bruijn(&u));
    }

    #[test]
    fn alpha_eq_agrees_with_nameless_form(t in lambda_term(), u in lambda_term()) {
        prop_assert_eq!(t.alpha_eq(&u), de_bruijn(&t) == de_bruijn(&u));
    }

    #[test]
    fn substitution_respects_alpha(t in lambda_term(), q in term_from(5, Grammar::Lambda), pick in 0..2usize) {
        let x = Symbol::new(["y", "z"][pick]);
        let a = t.subst(&x, &q);
        let b = alpha_variant(&t).subst(&x, &alpha_variant(&q));
        prop_assert!(a.alpha_eq(&b), "{} vs {}", a, b);
    }

    #[test]
    fn substitution_free_variables(t in lambda_term(), q in term_from(5, Grammar::Lambda), pick in 0..2usize) {
        let x = Symbol::new(["y", "z"][pick]);
        let r = t.subst(&x, &q);
        let mut expected = t.free_vars();
        if expected.remove(&x) {
            expected.extend(q.free_vars());
        }
        prop_assert_eq!(r.free_vars(), expected);
    }

    #[test]
    fn printing_round_trips(t in term_from(9, Grammar::Oplus)) {
        let back = parse(&t.to_string()).unwrap();
        prop_assert_eq!(de_bruijn(&back), de_bruijn(&t));
    }

    #[test]
    fn context_classes_are_prefix_closed(t in term_from(8, Grammar::Choice)) {
        for p in positions(&t) {
            let classes = classify(&t, &p).unwrap();
            for cut in 0..p.0.len() {
                let q = Position(p.0[..cut].to_vec());
                let outer = classify(&t, &q).unwrap();
                for c in [ContextClass::Head, ContextClass::Left, ContextClass::Weak] {
                    prop_assert!(!classes.contains(c) || outer.contains(c), "{} at {} vs {}", c, p, q);
                }
            }
        }
    }

    #[test]
    fn essential_and_inessential_partition_all_steps(t in lambda_term()) {
        for cal in calculi() {
            if cal.check_grammar(&t).is_err() {
                continue;
            }
            let all = enumerate_steps(&cal, &t, StepFilter::Any).unwrap();
            let e = essential_steps(&cal, &t).unwrap();
            let i = inessential_steps(&cal, &t).unwrap();
            prop_assert_eq!(all.len(), e.len() + i.len());
            for s in &all {
                let in_e = e.iter().any(|x| x.same_as(s));
                let in_i = i.iter().any(|x| x.same_as(s));
                prop_assert!(in_e != in_i, "{} in both or neither for {}", s, cal.name);
                prop_assert_eq!(in_e, s.in_class(cal.essential));
            }
        }
    }

    #[test]
    fn step_enumeration_is_deterministic(t in term_from(9, Grammar::Oplus)) {
        let cal = Calculus::new("beta-oplus", &[Rule::Beta, Rule::Oplus], ContextClass::Head);
        let a = enumerate_steps(&cal, &t, StepFilter::Any).unwrap();
        let b = enumerate_steps(&cal, &t, StepFilter::Any).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>()) {
        let spec = CorpusSpec::exhaustive(14, &["y", "z"], Grammar::Lambda).random(seed, 20);
        prop_assert_eq!(enumerate(&spec).unwrap(), enumerate(&spec).unwrap());
    }

    #[test]
    fn enumerator_index_round_trips(i in 0u64..10_000) {
        let e = enumerator(9, Grammar::Lambda);
        let t = e.term_at(i as u128).unwrap();
        prop_assert_eq!(e.index_of(&t), Some(i as u128));
    }

    #[test]
    fn lifting_conserves_mass(t in term_from(7, Grammar::Choice), u in term_from(6, Grammar::Choice)) {
        let half = Prob::new(1, 2);
        let m = MultiDist::new(vec![(half, t), (half, u)]).unwrap();
        for step in lift(LiftRel::Any, &m) {
            prop_assert_eq!(step.target.mass(), Prob::new(1, 1));
            for next in lift(LiftRel::Any, &step.target) {
                prop_assert_eq!(next.target.mass(), Prob::new(1, 1));
            }
        }
    }

    #[test]
    fn reordering_keeps_endpoints(t in lambda_term(), picks in prop::collection::vec(0..8usize, 1..4)) {
        let v = TermView::new(Calculus::new("beta", &[Rule::Beta], ContextClass::Head));
        let mut cur = t.clone();
        let mut seq = Vec::new();
        for p in picks {
            let steps = v.all_steps(&cur);
            if steps.is_empty() {
                break;
            }
            let s = steps[p % steps.len()].clone();
            cur = s.target.clone();
            seq.push(s);
        }
        if let Reordered::Factorized(out) = reorder_sequence(&v, &t, &seq, 20_000).unwrap() {
            prop_assert!(is_factorized(&v, &out));
            prop_assert!(replay_to(&v, &t, &out, &cur).is_ok());
        }
    }
}

#[test]
fn corpus_has_no_alpha_duplicates() {
    let corpus = enumerate(&CorpusSpec::exhaustive(7, &["y", "z"], Grammar::Oplus)).unwrap();
    let mut seen: HashMap<String, &Term> = HashMap::new();
    for t in &corpus {
        if let Some(prev) = seen.insert(de_bruijn(t), t) {
            panic!("{prev} and {t} are α-equivalent");
        }
    }
}
