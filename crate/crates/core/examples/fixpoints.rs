//! Root swaps for the fixpoint constants Y (head) and Z (weak, call-by-value).

use factorlab::factor::{check_swap, SwapCheck};
use factorlab::gen::{enumerate, CorpusSpec, Grammar};
use factorlab::rewrite::Rule;
use factorlab::term::{parse, ContextClass};

fn main() {
    let y_corpus =
        enumerate(&CorpusSpec::exhaustive(6, &["y", "z"], Grammar::Lambda).with_constants(&["Y"]))
            .unwrap();
    let y = SwapCheck::root_linear_swap(&[Rule::Beta], &[Rule::Y], ContextClass::Head, 6);
    println!("{}", check_swap(&y, &y_corpus, 100_000, 4).summary_line());

    let mut z_corpus =
        enumerate(&CorpusSpec::exhaustive(6, &["y", "z"], Grammar::Lambda).with_constants(&["Z"]))
            .unwrap();
    // The smallest Z peak has size 7.
    z_corpus.push(parse("Z (λx.(λw.w) x)").unwrap());
    let z = SwapCheck::root_linear_swap(&[Rule::BetaV], &[Rule::Z], ContextClass::Weak, 6);
    println!("{}", check_swap(&z, &z_corpus, 100_000, 4).summary_line());
}
