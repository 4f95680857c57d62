//! Left and weak factorization of call-by-value β with the σ permutations.

use factorlab::calculi::{entry, run_entry, RunConfig};
use factorlab::term::ContextClass;

fn main() {
    let shuffling = entry("shuffling").expect("catalog entry");
    let cfg = RunConfig {
        max_size: Some(6),
        ..RunConfig::default()
    };
    for e in [ContextClass::Left, ContextClass::Weak] {
        for r in run_entry(&shuffling, None, Some(e), &cfg).unwrap() {
            println!("{}", r.line());
        }
    }
}
