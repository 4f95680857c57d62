use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rewrite::{Calculus, Rule};
use crate::term::{AlphaKey, Symbol, Term, OPLUS};

/// Which term constructors a corpus may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grammar {
    /// Variables, constants, abstractions, applications.
    Lambda,
    /// As `Lambda`, plus `oplus t p` (fully applied unless configured otherwise).
    Oplus,
    /// As `Lambda`, plus the binary choice node.
    Choice,
}

impl Grammar {
    pub fn for_calculus(cal: &Calculus) -> Grammar {
        if cal.allows_choice {
            Grammar::Choice
        } else if cal.rules.contains(&Rule::Oplus) {
            Grammar::Oplus
        } else {
            Grammar::Lambda
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub max_size: usize,
    pub free_vars: Vec<String>,
    /// Constants usable as atoms. `oplus` is handled by the grammar.
    #[serde(default)]
    pub constants: Vec<String>,
    pub grammar: Grammar,
    pub mode: Mode,
    /// In random mode, probability of redrawing (a few times) until the
    /// term contains a βv-redex.
    #[serde(default)]
    pub value_bias: Option<f64>,
    /// Let `oplus` occur as a bare atom instead of only fully applied.
    #[serde(default)]
    pub partial_oplus: bool,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CorpusError {
    #[error("max_size must be at least 1")]
    ZeroSize,
    #[error("max_size {0} is beyond the supported bound of 40")]
    TooLarge(usize),
    #[error("value_bias must lie in [0, 1], got {0}")]
    BadBias(f64),
}

impl CorpusSpec {
    pub fn exhaustive(max_size: usize, free_vars: &[&str], grammar: Grammar) -> CorpusSpec {
        CorpusSpec {
            max_size,
            free_vars: free_vars.iter().map(|s| s.to_string()).collect(),
            constants: Vec::new(),
            grammar,
            mode: Mode::Exhaustive,
            value_bias: None,
            partial_oplus: false,
        }
    }

    /// Exhaustive corpus for a calculus, with its constant alphabet.
    pub fn for_calculus(cal: &Calculus, max_size: usize, free_vars: &[&str]) -> CorpusSpec {
        let mut spec = CorpusSpec::exhaustive(max_size, free_vars, Grammar::for_calculus(cal));
        spec.constants = cal
            .constants
            .iter()
            .filter(|c| c.as_str() != OPLUS)
            .cloned()
            .collect();
        spec
    }

    pub fn with_constants(mut self, constants: &[&str]) -> CorpusSpec {
        self.constants = constants.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn random(mut self, seed: u64, count: usize) -> CorpusSpec {
        self.mode = Mode::Random { seed, count };
        self
    }

    /// Short human-readable descriptor used in report headers.
    pub fn describe(&self) -> String {
        let mode = match &self.mode {
            Mode::Exhaustive => "exhaustive".to_string(),
            Mode::Random { seed, count } => format!("random(chacha8, seed={seed}, count={count})"),
        };
        format!(
            "{} {:?} size<={} vars={:?} consts={:?}",
            mode, self.grammar, self.max_size, self.free_vars, self.constants
        )
        .replace('"', "")
    }

    fn validate(&self) -> Result<(), CorpusError> {
        if self.max_size == 0 {
            return Err(CorpusError::ZeroSize);
        }
        if self.max_size > 40 {
            return Err(CorpusError::TooLarge(self.max_size));
        }
        if let Some(b) = self.value_bias {
            if !(0.0..=1.0).contains(&b) {
                return Err(CorpusError::BadBias(b));
            }
        }
        Ok(())
    }
}

const BINDER_NAMES: [&str; 14] = [
    "x", "y", "z", "w", "u", "v", "a", "b", "c", "d", "e", "f", "g", "h",
];

/// Counting tables and naming for one spec. Terms are indexed by
/// (size, structural rank); indices are stable across runs.
#[derive(Clone, Debug)]
pub struct Enumerator {
    spec: CorpusSpec,
    free: Vec<Symbol>,
    consts: Vec<Symbol>,
    binders: Vec<Symbol>,
    /// counts[n][d]: terms of size n under d enclosing binders.
    counts: Vec<Vec<u128>>,
}

impl Enumerator {
    pub fn new(spec: &CorpusSpec) -> Result<Enumerator, CorpusError> {
        spec.validate()?;
        let free: Vec<Symbol> = dedup(&spec.free_vars);
        let mut consts: Vec<Symbol> = dedup(&spec.constants)
            .into_iter()
            .filter(|c| c.as_str() != OPLUS)
            .collect();
        if spec.grammar == Grammar::Oplus && spec.partial_oplus {
            consts.push(Symbol::new(OPLUS));
        }
        let taken: BTreeSet<&str> = free.iter().chain(&consts).map(|s| s.as_str()).collect();
        let mut binders: Vec<Symbol> = BINDER_NAMES
            .iter()
            .filter(|n| !taken.contains(*n))
            .map(|n| Symbol::new(n))
            .collect();
        let mut i = 1;
        while binders.len() < spec.max_size {
            let n = format!("x{i}");
            if !taken.contains(n.as_str()) {
                binders.push(Symbol::new(&n));
            }
            i += 1;
        }
        let mut e = Enumerator {
            spec: spec.clone(),
            free,
            consts,
            binders,
            counts: Vec::new(),
        };
        e.fill_counts();
        Ok(e)
    }

    pub fn spec(&self) -> &CorpusSpec {
        &self.spec
    }

    fn full_oplus(&self) -> bool {
        self.spec.grammar == Grammar::Oplus && !self.spec.partial_oplus
    }

    fn atoms(&self, depth: usize) -> usize {
        self.free.len() + depth + self.consts.len()
    }

    fn fill_counts(&mut self) {
        let max = self.spec.max_size;
        // Depth never exceeds size, so d ranges over 0..=max.
        self.counts = vec![vec![0u128; max + 2]; max + 1];
        for n in 1..=max {
            for d in 0..=max {
                let mut c = 0u128;
                if n == 1 {
                    c += self.atoms(d) as u128;
                }
                if n >= 2 && d < max {
                    c = c.saturating_add(self.counts[n - 1][d + 1]);
                }
                for k in 1..n.saturating_sub(1) {
                    c = c.saturating_add(
                        self.counts[k][d].saturating_mul(self.counts[n - 1 - k][d]),
                    );
                }
                if self.full_oplus() {
                    for k in 1..n.saturating_sub(3) {
                        c = c.saturating_add(
                            self.counts[k][d].saturating_mul(self.counts[n - 3 - k][d]),
                        );
                    }
                }
                if self.spec.grammar == Grammar::Choice {
                    for k in 1..n.saturating_sub(1) {
                        c = c.saturating_add(
                            self.counts[k][d].saturating_mul(self.counts[n - 1 - k][d]),
                        );
                    }
                }
                self.counts[n][d] = c;
            }
        }
    }

    /// Number of closed-under-free-vars terms of exactly size `n`.
    pub fn count_of_size(&self, n: usize) -> u128 {
        if n == 0 || n > self.spec.max_size {
            0
        } else {
            self.counts[n][0]
        }
    }

    /// Number of terms of size at most `max_size`.
    pub fn total(&self) -> u128 {
        (1..=self.spec.max_size)
            .map(|n| self.count_of_size(n))
            .sum()
    }

    /// The `index`-th term of the canonical stream.
    pub fn term_at(&self, mut index: u128) -> Option<Term> {
        for n in 1..=self.spec.max_size {
            let c = self.count_of_size(n);
            if index < c {
                return Some(self.unrank(n, 0, index));
            }
            index -= c;
        }
        None
    }

    fn unrank(&self, n: usize, d: usize, mut i: u128) -> Term {
        if n == 1 {
            let i = i as usize;
            if i < self.free.len() {
                return Term::Var(self.free[i].clone());
            }
            let i = i - self.free.len();
            if i < d {
                return Term::Var(self.binders[i].clone());
            }
            return Term::Const(self.consts[i - d].clone());
        }
        let abs = self.counts[n - 1][d + 1];
        if i < abs {
            return Term::abs_sym(self.binders[d].clone(), self.unrank(n - 1, d + 1, i));
        }
        i -= abs;
        if let Some(t) = self.unrank_pair(n - 1, d, &mut i, Term::app) {
            return t;
        }
        if self.full_oplus() && n > 3 {
            if let Some(t) = self.unrank_pair(n - 3, d, &mut i, Term::oplus) {
                return t;
            }
        }
        if self.spec.grammar == Grammar::Choice {
            if let Some(t) = self.unrank_pair(n - 1, d, &mut i, Term::choice) {
                return t;
            }
        }
        unreachable!("index beyond the count for size {n}")
    }

    /// Pairs whose two components have sizes summing to `m`, left major.
    fn unrank_pair(
        &self,
        m: usize,
        d: usize,
        i: &mut u128,
        mk: fn(Term, Term) -> Term,
    ) -> Option<Term> {
        for k in 1..m {
            let (cl, cr) = (self.counts[k][d], self.counts[m - k][d]);
            let c = cl * cr;
            if *i < c {
                return Some(mk(
                    self.unrank(k, d, *i / cr),
                    self.unrank(m - k, d, *i % cr),
                ));
            }
            *i -= c;
        }
        None
    }

    /// Position of `t`'s α-class in the canonical stream, if the corpus contains it.
    pub fn index_of(&self, t: &Term) -> Option<u128> {
        let n = t.size();
        if n > self.spec.max_size {
            return None;
        }
        let offset: u128 = (1..n).map(|k| self.count_of_size(k)).sum();
        Some(offset + self.rank(&t.alpha_key(), n, 0)?)
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index_of(t).is_some()
    }

    fn rank(&self, k: &AlphaKey, n: usize, d: usize) -> Option<u128> {
        match k {
            AlphaKey::Free(x) => self.free.iter().position(|f| f == x).map(|i| i as u128),
            AlphaKey::Bound(i) => {
                let i = *i as usize;
                (i < d).then(|| (self.free.len() + d - 1 - i) as u128)
            }
            AlphaKey::Const(c) => {
                let i = self.consts.iter().position(|x| x == c)?;
                Some((self.free.len() + d + i) as u128)
            }
            AlphaKey::Abs(body) => self.rank(body, n - 1, d + 1),
            AlphaKey::App(f, a) => {
                if self.full_oplus() {
                    if let AlphaKey::App(op, l) = f.as_ref() {
                        if matches!(op.as_ref(), AlphaKey::Const(c) if c.as_str() == OPLUS) {
                            let base = self.counts[n - 1][d + 1] + self.pairs_total(n - 1, d);
                            return Some(base + self.rank_pair(l, a, n - 3, d)?);
                        }
                    }
                }
                let base = self.counts[n - 1][d + 1];
                Some(base + self.rank_pair(f, a, n - 1, d)?)
            }
            AlphaKey::Choice(l, r) => {
                if self.spec.grammar != Grammar::Choice {
                    return None;
                }
                let mut base = self.counts[n - 1][d + 1] + self.pairs_total(n - 1, d);
                if self.full_oplus() {
                    base += self.pairs_total(n.saturating_sub(3), d);
                }
                Some(base + self.rank_pair(l, r, n - 1, d)?)
            }
        }
    }

    fn pairs_total(&self, m: usize, d: usize) -> u128 {
        (1..m)
            .map(|k| self.counts[k][d] * self.counts[m - k][d])
            .sum()
    }

    fn rank_pair(&self, l: &AlphaKey, r: &AlphaKey, m: usize, d: usize) -> Option<u128> {
        let sl = key_size(l);
        if sl >= m {
            return None;
        }
        let before: u128 = (1..sl)
            .map(|k| self.counts[k][d] * self.counts[m - k][d])
            .sum();
        let rl = self.rank(l, sl, d)?;
        let rr = self.rank(r, m - sl, d)?;
        Some(before + rl * self.counts[m - sl][d] + rr)
    }

    pub fn iter(&self) -> CorpusIter<'_> {
        CorpusIter {
            e: self,
            size: 1,
            index: 0,
        }
    }
}

fn key_size(k: &AlphaKey) -> usize {
    match k {
        AlphaKey::Bound(_) | AlphaKey::Free(_) | AlphaKey::Const(_) => 1,
        AlphaKey::Abs(b) => 1 + key_size(b),
        AlphaKey::App(a, b) | AlphaKey::Choice(a, b) => 1 + key_size(a) + key_size(b),
    }
}

fn dedup(names: &[String]) -> Vec<Symbol> {
    let mut seen = BTreeSet::new();
    names
        .iter()
        .filter(|n| seen.insert(n.as_str()))
        .map(|n| Symbol::new(n))
        .collect()
}

/// Lazy exhaustive stream in canonical order.
pub struct CorpusIter<'a> {
    e: &'a Enumerator,
    size: usize,
    index: u128,
}

impl Iterator for CorpusIter<'_> {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        while self.size <= self.e.spec.max_size {
            if self.index < self.e.count_of_size(self.size) {
                let t = self.e.unrank(self.size, 0, self.index);
                self.index += 1;
                return Some(t);
            }
            self.size += 1;
            self.index = 0;
        }
        None
    }
}

/// The corpus described by `spec`, materialized in stream order.
pub fn enumerate(spec: &CorpusSpec) -> Result<Vec<Term>, CorpusError> {
    let e = Enumerator::new(spec)?;
    Ok(match spec.mode {
        Mode::Exhaustive => e.iter().collect(),
        Mode::Random { seed, count } => super::random::sample(&e, seed, count, spec.value_bias),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn single_variable() {
        let spec = CorpusSpec::exhaustive(1, &["x"], Grammar::Lambda);
        assert_eq!(enumerate(&spec).unwrap(), vec![Term::var("x")]);
    }

    #[test]
    fn known_counts() {
        let spec = CorpusSpec::exhaustive(7, &["y", "z"], Grammar::Lambda);
        let e = Enumerator::new(&spec).unwrap();
        assert_eq!(e.total(), 1711);
        let spec = CorpusSpec::exhaustive(7, &["y", "z"], Grammar::Oplus);
        assert_eq!(Enumerator::new(&spec).unwrap().total(), 1833);
    }

    #[test]
    fn empty_alphabet_gives_empty_stream() {
        let spec = CorpusSpec::exhaustive(1, &[], Grammar::Lambda);
        assert!(enumerate(&spec).unwrap().is_empty());
        assert_eq!(
            enumerate(&CorpusSpec::exhaustive(0, &["x"], Grammar::Lambda)),
            Err(CorpusError::ZeroSize)
        );
    }

    #[test]
    fn rank_inverts_unrank() {
        for g in [Grammar::Lambda, Grammar::Oplus, Grammar::Choice] {
            let spec = CorpusSpec::exhaustive(6, &["p", "q"], g).with_constants(&["Y"]);
            let e = Enumerator::new(&spec).unwrap();
            for (i, t) in e.iter().enumerate() {
                assert_eq!(e.index_of(&t), Some(i as u128), "{t}");
            }
        }
    }

    #[test]
    fn membership_is_up_to_alpha() {
        let spec = CorpusSpec::exhaustive(12, &["p", "q"], Grammar::Oplus);
        let e = Enumerator::new(&spec).unwrap();
        let t = parse("(λa.a a a) (oplus p q)").unwrap();
        let i = e.index_of(&t).expect("fixture is in the corpus");
        assert!(e.term_at(i).unwrap().alpha_eq(&t));
        assert!(!e.contains(&parse("oplus p").unwrap()));
        assert!(!e.contains(&parse("r").unwrap()));
    }
}
