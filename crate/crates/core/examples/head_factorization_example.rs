//! Reordering a mixed β sequence into head steps followed by non-head steps.

use factorlab::factor::{
    factorization_oracle, is_factorized, reorder_sequence, Ars, Reordered, Side, TermView,
};
use factorlab::rewrite::{Calculus, Rule};
use factorlab::term::{parse, ContextClass};

fn main() {
    let v = TermView::new(Calculus::new("beta", &[Rule::Beta], ContextClass::Head));
    let t = parse("(λx.x x x) ((λz.z) z)").unwrap();

    // Reduce the argument first (non-head), then fire the head redex.
    let inner = v.steps(&t, Side::Inessential).remove(0);
    let outer = v.steps(&inner.target, Side::Essential).remove(0);
    println!("mixed:      {t} -> {} -> {}", inner.target, outer.target);

    let Ok(Reordered::Factorized(seq)) = reorder_sequence(&v, &t, &[inner, outer], 10_000) else {
        panic!("reordering did not finish");
    };
    print!("factorized: {t}");
    for s in &seq {
        print!(" -{}-> {}", v.side(s), s.target);
    }
    println!();
    assert!(is_factorized(&v, &seq));

    // The oracle agrees for every endpoint within two steps.
    let run = factorization_oracle(&v, &t, 2, 10_000);
    let held = run.endpoints.iter().filter(|e| e.verdict.holds()).count();
    println!("oracle: {held}/{} endpoints factorize", run.endpoints.len());
}
