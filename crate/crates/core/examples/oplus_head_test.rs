//! The modular head test for β with the binary choice rule.

use factorlab::factor::{head_test, Bounds};
use factorlab::gen::{enumerate, CorpusSpec, Grammar};
use factorlab::rewrite::Rule;
use factorlab::term::parse;

fn main() {
    let mut corpus = enumerate(&CorpusSpec::exhaustive(6, &["p", "q"], Grammar::Oplus)).unwrap();
    // Terms with a redex inside a choice start at size 8.
    corpus.extend(["oplus ((λx.x) p) q", "(λx.x x x) (oplus p q)"].map(|s| parse(s).unwrap()));

    let report = head_test(Rule::Oplus, &corpus, &Bounds::default());
    for (i, r) in report.subchecks.iter().enumerate() {
        println!("sub-check {}: {}", i + 1, r.summary_line());
    }
    println!("{}", report.summary.verdict);
}
