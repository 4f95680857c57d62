//! Looking for the smallest peak that breaks strong postponement for β.

use factorlab::factor::{search_counterexample, SwapCheck};
use factorlab::gen::{enumerate, CorpusSpec, Grammar};
use factorlab::rewrite::{Calculus, Rule};
use factorlab::term::{parse, ContextClass};

fn main() {
    let cal = Calculus::new("beta", &[Rule::Beta], ContextClass::Head);
    let mut corpus = enumerate(&CorpusSpec::exhaustive(6, &["y", "z"], Grammar::Lambda)).unwrap();
    corpus.push(parse("(λx.x x x) ((λz.z) z)").unwrap());

    let sp = SwapCheck::strong_postponement(&cal, 6);
    let rep = search_counterexample(&sp, &corpus, 100_000, 1);
    println!("{}", rep.summary_line());
    if let Some(ev) = rep.counterexamples.first() {
        println!("smallest failing source: {} (size {})", ev.source, ev.size);
    }
}
