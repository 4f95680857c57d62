use std::collections::BTreeSet;

use super::dist::{MultiDist, Prob};
use super::step::{lift, term_prob_steps, LiftRel, ProbKind, ProbStep, ProbView};
use crate::factor::{check_factorization, Ars, Bounds};
use crate::report::{run_over, Evidence, Outcome, Report, StepRecord};
use crate::rewrite::{steps_of, Rule, StepFilter};
use crate::term::Term;

const CALCULUS: &str = "prob-cbv";

fn record(kind: &str, at: String, target: &MultiDist) -> StepRecord {
    StepRecord {
        rule: kind.to_string(),
        at,
        target: target.to_string(),
        essential: None,
    }
}

fn evidence(t: &Term, peak: Vec<StepRecord>) -> Evidence {
    Evidence {
        size: t.size(),
        source: t.to_string(),
        peak,
        closing: Vec::new(),
        note: String::new(),
    }
}

/// Every peak `M →¬s βv N →⊕ n` closes as `M →⊕ m ⇛βv n` with one lifted step.
pub fn check_prob_surface_swap(corpus: &[Term], bounds: &Bounds) -> Report {
    let template = Report::new(
        "prob-surface-swap",
        CALCULUS,
        &format!("{} terms", corpus.len()),
    )
    .with_limit(bounds.evidence_limit);
    run_over(corpus, &template, |t, rep| {
        let steps = term_prob_steps(t);
        let firsts: Vec<_> = steps.iter().filter(|s| s.kind == ProbKind::Oplus).collect();
        for deep in steps.iter().filter(|s| s.kind == ProbKind::DeepBetaV) {
            let n_term = &deep.result.entries()[0].term;
            for choice in term_prob_steps(n_term)
                .into_iter()
                .filter(|s| s.kind == ProbKind::Oplus)
            {
                let goal = choice.result.key();
                let mut ev = evidence(
                    t,
                    vec![
                        record("betav-deep", deep.pos.to_string(), &deep.result),
                        record("oplus", choice.pos.to_string(), &choice.result),
                    ],
                );
                let closing = firsts.iter().find_map(|f| {
                    lift(LiftRel::BetaV, &f.result)
                        .into_iter()
                        .find(|l| l.target.key() == goal)
                        .map(|l| (f, l))
                });
                rep.record(match closing {
                    Some((f, l)) => {
                        ev.closing = vec![
                            record("oplus", f.pos.to_string(), &f.result),
                            record("betav", moves_text(&l), &l.target),
                        ];
                        Outcome::Closed(ev)
                    }
                    None => {
                        ev.note = "no →⊕·⇛βv closing".into();
                        Outcome::Failed(ev)
                    }
                });
            }
        }
    })
}

fn moves_text(l: &ProbStep) -> String {
    ProbView.record(l).at
}

/// The surface factorization oracle started from `⟦1·M⟧` for each term.
pub fn check_prob_factorization(corpus: &[Term], bounds: &Bounds) -> Report {
    let states: Vec<MultiDist> = corpus.iter().cloned().map(MultiDist::dirac).collect();
    check_factorization(
        &ProbView,
        "prob-surface-factorization",
        CALCULUS,
        &states,
        bounds,
    )
}

/// Mass is preserved exactly by every lift out of `⟦1·M⟧` and out of each
/// of its one-step successors.
pub fn check_mass_conservation(corpus: &[Term]) -> Report {
    let template = Report::new(
        "prob-mass-conservation",
        CALCULUS,
        &format!("{} terms", corpus.len()),
    );
    run_over(corpus, &template, |t, rep| {
        let start = MultiDist::dirac(t.clone());
        let mut frontier = vec![start];
        for _ in 0..2 {
            let mut next = Vec::new();
            for m in &frontier {
                for l in lift(LiftRel::Any, m) {
                    let mut ev = evidence(t, vec![record("any", moves_text(&l), &l.target)]);
                    if l.target.mass() == m.mass() && l.target.mass() == Prob::from_integer(1) {
                        rep.record(Outcome::Closed(ev));
                    } else {
                        ev.note = format!("mass {} became {}", m.mass(), l.target.mass());
                        rep.record(Outcome::Failed(ev));
                    }
                    next.push(l.target);
                }
            }
            frontier = next;
        }
    })
}

/// On choice-free terms, `⟦1·M⟧ ⇛βv ⟦1·N⟧` exactly when `M →βv N`.
pub fn check_embedding(corpus: &[Term]) -> Report {
    let template = Report::new("prob-embedding", CALCULUS, "choice-free terms");
    let plain: Vec<&Term> = corpus.iter().filter(|t| !t.contains_choice()).collect();
    run_over(&plain, &template, |t, rep| {
        let direct: BTreeSet<_> = steps_of(&[Rule::BetaV], t, StepFilter::Any)
            .into_iter()
            .map(|s| MultiDist::dirac(s.target).key())
            .collect();
        let lifted: Vec<ProbStep> = lift(LiftRel::BetaV, &MultiDist::dirac((*t).clone()));
        let lifted_keys: BTreeSet<_> = lifted.iter().map(|l| l.target.key()).collect();
        let mut ev = evidence(
            t,
            lifted
                .iter()
                .map(|l| record("betav", moves_text(l), &l.target))
                .collect(),
        );
        let singletons = lifted.iter().all(|l| l.target.len() == 1);
        if direct == lifted_keys && singletons {
            rep.record(Outcome::Closed(ev));
        } else {
            ev.note = format!(
                "{} plain reducts, {} lifted",
                direct.len(),
                lifted_keys.len()
            );
            rep.record(Outcome::Failed(ev));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn branch_and_context_peaks_close() {
        let corpus: Vec<Term> = ["((λx.x) a (+) b) c", "(λy.(λx.x) y) ((λz.z) (+) w)", "λx.x"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        let r = check_prob_surface_swap(&corpus, &Bounds::default());
        assert_eq!(r.counts.peaks, 2);
        assert_eq!(r.counts.failed, 0);
    }

    #[test]
    fn embedding_and_mass() {
        let corpus: Vec<Term> = ["(λx.x) ((λy.y) z)", "λx.(λy.y) x", "a (+) (λx.x) b"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        let e = check_embedding(&corpus);
        assert_eq!(e.counts.items, 2);
        assert_eq!(e.counts.failed, 0);
        let m = check_mass_conservation(&corpus);
        assert!(m.counts.peaks > 0);
        assert_eq!(m.counts.failed, 0);
    }

    #[test]
    fn mixed_sequence_factorizes() {
        let corpus = vec![parse("(λy.(λx.x) y) (+) z").unwrap()];
        let r = check_prob_factorization(&corpus, &Bounds::default());
        assert!(r.counts.peaks > 0);
        assert_eq!((r.counts.failed, r.counts.unknown), (0, 0));
    }
}
