//! Exhaustive and seeded random corpora.

use factorlab::gen::{enumerate, CorpusSpec, Enumerator, Grammar};

fn main() {
    let spec = CorpusSpec::exhaustive(5, &["y", "z"], Grammar::Lambda);
    let e = Enumerator::new(&spec).unwrap();
    for n in 1..=5 {
        println!("size {n}: {} terms", e.count_of_size(n));
    }
    let terms = enumerate(&spec).unwrap();
    println!(
        "first five: {:?}",
        terms
            .iter()
            .take(5)
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
    );

    let sampled =
        enumerate(&CorpusSpec::exhaustive(12, &["y", "z"], Grammar::Lambda).random(7, 5)).unwrap();
    for t in sampled {
        println!("sample: {t}");
    }
}
