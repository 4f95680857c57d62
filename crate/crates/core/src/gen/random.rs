use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Enumerator;
use crate::term::Term;

const BIAS_REDRAWS: usize = 8;

/// `count` distinct corpus terms drawn uniformly by index with ChaCha8
/// seeded from `seed`, returned in draw order. When `count` covers the whole
/// corpus the exhaustive stream is returned.
pub fn sample(e: &Enumerator, seed: u64, count: usize, value_bias: Option<f64>) -> Vec<Term> {
    let total = e.total();
    if total == 0 {
        return Vec::new();
    }
    if count as u128 >= total {
        return e.iter().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut idx = rng.gen_range(0..total);
        if let Some(b) = value_bias {
            if rng.gen_bool(b) {
                for _ in 0..BIAS_REDRAWS {
                    if has_betav_redex(&e.term_at(idx).expect("index in range")) {
                        break;
                    }
                    idx = rng.gen_range(0..total);
                }
            }
        }
        if seen.insert(idx) {
            out.push(e.term_at(idx).expect("index in range"));
        }
    }
    out
}

fn has_betav_redex(t: &Term) -> bool {
    t.is_betav_redex()
        || match t {
            Term::Var(_) | Term::Const(_) => false,
            Term::Abs { body, .. } => has_betav_redex(body),
            Term::App { fun: a, arg: b } | Term::Choice { left: a, right: b } => {
                has_betav_redex(a) || has_betav_redex(b)
            }
        }
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate, CorpusSpec, Grammar};

    #[test]
    fn same_seed_same_stream() {
        let spec = CorpusSpec::exhaustive(8, &["y", "z"], Grammar::Lambda).random(7, 50);
        let a = enumerate(&spec).unwrap();
        assert_eq!(a.len(), 50);
        assert_eq!(a, enumerate(&spec).unwrap());
        let other = enumerate(&spec.clone().random(8, 50)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn bias_raises_redex_share() {
        let base = CorpusSpec::exhaustive(8, &["y", "z"], Grammar::Lambda).random(3, 200);
        let mut biased = base.clone();
        biased.value_bias = Some(1.0);
        let share =
            |ts: Vec<crate::term::Term>| ts.iter().filter(|t| super::has_betav_redex(t)).count();
        assert!(share(enumerate(&biased).unwrap()) > share(enumerate(&base).unwrap()));
    }
}
