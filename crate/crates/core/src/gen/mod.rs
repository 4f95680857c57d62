//! Corpus generation: exhaustive by size, or seeded random samples.

mod enumerate;
mod random;

use std::io::{self, BufRead, Write};

pub use enumerate::{enumerate, CorpusError, CorpusIter, CorpusSpec, Enumerator, Grammar, Mode};
pub use random::sample;

use crate::term::{parse, ParseError, Parser, Symbol, Term};

/// Substituends for substitutivity checks. With `values_only` every entry is
/// a value, as call-by-value rules require. Includes a term whose free
/// variable clashes with generated binder names, to force renaming.
pub fn substituend_pool(free_vars: &[String], values_only: bool) -> Vec<Term> {
    let mut pool: Vec<Term> = free_vars.iter().map(|v| Term::var(v)).collect();
    pool.push(Term::var("x"));
    pool.push(parse("λw.w").expect("fixture"));
    if let Some(v) = free_vars.first() {
        pool.push(Term::abs("w", Term::app(Term::var(v), Term::var("x"))));
        if !values_only {
            pool.push(Term::app(Term::var(v), Term::var("x")));
            pool.push(Term::app(parse("λw.w").expect("fixture"), Term::var(v)));
        }
    }
    pool
}

/// Corpus terms × free variables × substituends, in that nesting order.
pub fn substitution_triples(
    corpus: &[Term],
    free_vars: &[String],
    pool: &[Term],
) -> Vec<(Term, Symbol, Term)> {
    let mut out = Vec::with_capacity(corpus.len() * free_vars.len() * pool.len());
    for t in corpus {
        for x in free_vars {
            for q in pool {
                out.push((t.clone(), Symbol::new(x), q.clone()));
            }
        }
    }
    out
}

/// One canonical term per line.
pub fn dump<W: Write>(terms: &[Term], mut out: W) -> io::Result<()> {
    for t in terms {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

/// Reads a line-delimited corpus; blank lines are skipped.
pub fn load<R: BufRead>(input: R, parser: &Parser) -> Result<Vec<Term>, LoadError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parser.parse(&line).map_err(|source| LoadError::Parse {
            line: i + 1,
            source,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_triple_present() {
        let fv = vec!["x".to_string()];
        let corpus = vec![Term::var("x")];
        let triples = substitution_triples(&corpus, &fv, &substituend_pool(&fv, false));
        assert!(triples
            .iter()
            .any(|(t, x, q)| t == &Term::var("x") && x.as_str() == "x" && q == &Term::var("x")));
        assert!(substitution_triples(&corpus, &fv, &[]).is_empty());
    }

    #[test]
    fn value_pool_has_only_values() {
        let fv = vec!["y".to_string(), "z".to_string()];
        assert!(substituend_pool(&fv, true).iter().all(|t| t.is_value()));
        assert!(substituend_pool(&fv, false).iter().any(|t| !t.is_value()));
    }

    #[test]
    fn dump_and_reload() {
        let spec = CorpusSpec::exhaustive(5, &["p", "q"], Grammar::Oplus);
        let terms = enumerate(&spec).unwrap();
        let mut buf = Vec::new();
        dump(&terms, &mut buf).unwrap();
        let back = load(&buf[..], &Parser::default()).unwrap();
        assert_eq!(back, terms);
    }
}
