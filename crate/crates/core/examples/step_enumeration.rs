//! Enumerating the steps of a term and splitting them by context class.

use factorlab::rewrite::{enumerate_steps, Calculus, Rule, StepFilter};
use factorlab::term::{parse, ContextClass};

fn main() {
    let head = Calculus::new("beta", &[Rule::Beta], ContextClass::Head);
    let t = parse("(λx.x x) ((λy.y) z)").unwrap();
    for s in enumerate_steps(&head, &t, StepFilter::Any).unwrap() {
        let tag = if s.in_class(ContextClass::Head) {
            "head"
        } else {
            "non-head"
        };
        println!("{tag:9} {}@{} -> {}", s.rule, s.pos, s.target);
    }

    // The same shape under call-by-value, with left and weak classes.
    let cbv = Calculus::new("betav", &[Rule::BetaV], ContextClass::Left);
    let u = parse("λw.(λx.x) ((λy.y) z)").unwrap();
    for s in enumerate_steps(&cbv, &u, StepFilter::Any).unwrap() {
        let classes: Vec<&str> = s.classes.iter().map(|c| c.name()).collect();
        println!("{}@{} classes={:?} -> {}", s.rule, s.pos, classes, s.target);
    }
}
