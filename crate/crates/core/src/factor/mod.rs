//! Postponement and factorization checkers over abstract rewriting systems.

mod ars;
mod modular;
mod oracle;
mod reorder;
mod swap;

use serde::{Deserialize, Serialize};

pub use ars::{is_factorized, replay, replay_to, Ars, ReplayError, Side, TermView};
pub use modular::{
    head_test, head_test_with, leftweak_test, leftweak_test_with, modular_test, Component,
    ModularSummary, TestReport,
};
pub use oracle::{
    check_factorization, factorization_oracle, reachable, EndpointVerdict, OracleRun, Verdict,
};
pub use reorder::{reorder_sequence, ReorderError, Reordered};
pub use swap::{
    check_composed_swap, check_swap, find_closing, search_counterexample, Closing, Filter, Rel,
    Segment, SwapCheck, SwapKind,
};

/// Search limits shared by the checkers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Longest starred segment in a closing path.
    pub path_bound: usize,
    /// Longest mixed sequence the oracle enumerates.
    pub seq_depth: usize,
    /// Explored-state cap per search.
    pub budget: usize,
    /// Unknown verdicts allowed before a check counts as inconclusive.
    pub unknown_tolerance: usize,
    pub evidence_limit: usize,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            path_bound: 6,
            seq_depth: 4,
            budget: 100_000,
            unknown_tolerance: 0,
            evidence_limit: crate::report::DEFAULT_EVIDENCE_LIMIT,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{Calculus, Rule};
    use crate::term::{parse, ContextClass, Term};

    fn beta_head() -> TermView {
        TermView::new(Calculus::new("beta", &[Rule::Beta], ContextClass::Head))
    }

    fn texts(seq: &[crate::rewrite::Step]) -> Vec<String> {
        seq.iter().map(|s| s.target.to_string()).collect()
    }

    #[test]
    fn duplication_example_factorizes_head_first() {
        let v = beta_head();
        let t = parse("(λx.x x x) ((λz.z) z)").unwrap();
        let zzz = parse("z z z").unwrap();
        let run = factorization_oracle(&v, &t, 2, 10_000);
        let Some(Verdict::Holds { witness }) = run.verdict_for(&v, &zzz) else {
            panic!("no witness for zzz");
        };
        assert_eq!(
            texts(witness),
            [
                "(λz.z) z ((λz.z) z) ((λz.z) z)",
                "z ((λz.z) z) ((λz.z) z)",
                "z z ((λz.z) z)",
                "z z z"
            ]
        );
        let sides: Vec<Side> = witness.iter().map(|s| v.side(s)).collect();
        assert_eq!(
            sides,
            [
                Side::Essential,
                Side::Essential,
                Side::Inessential,
                Side::Inessential
            ]
        );
    }

    #[test]
    fn reorder_matches_oracle_on_duplication() {
        let v = beta_head();
        let t = parse("(λx.x x x) ((λz.z) z)").unwrap();
        let first = v.steps(&t, Side::Inessential).remove(0);
        let second = v.steps(&first.target, Side::Essential).remove(0);
        let seq = vec![first, second];
        let Reordered::Factorized(out) = reorder_sequence(&v, &t, &seq, 10_000).unwrap() else {
            panic!("budget");
        };
        assert_eq!(out.len(), 4);
        assert!(is_factorized(&v, &out));
        replay_to(&v, &t, &out, &parse("z z z").unwrap()).unwrap();
    }

    #[test]
    fn reorder_fixed_points() {
        let v = beta_head();
        let t = parse("(λx.x) ((λy.y) z)").unwrap();
        assert_eq!(
            reorder_sequence(&v, &t, &[], 10).unwrap(),
            Reordered::Factorized(vec![])
        );
        let e = v.steps(&t, Side::Essential);
        assert_eq!(
            reorder_sequence(&v, &t, &e[..1], 10).unwrap(),
            Reordered::Factorized(e[..1].to_vec())
        );
        let bogus = v.steps(&parse("(λy.y) q").unwrap(), Side::Essential);
        assert!(reorder_sequence(&v, &t, &bogus, 10).is_err());
    }

    #[test]
    fn beta_eta_is_refuted() {
        let v = TermView::new(Calculus::new(
            "beta-eta",
            &[Rule::Beta, Rule::Eta],
            ContextClass::Head,
        ));
        let t = parse("λx.(λz.z) (λz.z) ((λz.z) x)").unwrap();
        let ii = parse("(λz.z) (λz.z)").unwrap();
        let run = factorization_oracle(&v, &t, 2, 10_000);
        assert!(run.closed);
        assert!(run.verdict_for(&v, &ii).unwrap().is_refuted());
    }

    #[test]
    fn unknown_when_budget_is_tiny() {
        let v = beta_head();
        let t = parse("(λx.x x x) ((λz.z) z)").unwrap();
        let run = factorization_oracle(&v, &t, 2, 2);
        assert!(!run.closed);
        assert!(run.endpoints.iter().any(|e| e.verdict.is_unknown()));
        assert!(!run.endpoints.iter().any(|e| e.verdict.is_refuted()));
    }

    #[test]
    fn normal_form_has_no_endpoints() {
        let v = beta_head();
        let run = factorization_oracle(&v, &Term::var("z"), 3, 10);
        assert!(run.endpoints.is_empty());
    }
}
