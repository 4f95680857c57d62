//! Head factorization fails once η joins β.

use factorlab::calculi::beta_eta_counterexample_demo;
use factorlab::factor::{factorization_oracle, TermView, Verdict};
use factorlab::rewrite::{Calculus, Rule};
use factorlab::term::{parse, ContextClass};

fn main() {
    print!("{}", beta_eta_counterexample_demo());

    let v = TermView::new(Calculus::new(
        "beta-eta",
        &[Rule::Beta, Rule::Eta],
        ContextClass::Head,
    ));
    let t = parse("λx.(λz.z) (λz.z) ((λz.z) x)").unwrap();
    let run = factorization_oracle(&v, &t, 4, 100_000);
    println!(
        "search closed after {} states: {}",
        run.explored, run.closed
    );
    for ep in &run.endpoints {
        if let Verdict::Refuted { .. } = ep.verdict {
            println!("no head-first path to {}", ep.endpoint);
        }
    }
}
