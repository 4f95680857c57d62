use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{check_factorization, check_swap, Bounds, SwapCheck, TermView};
use crate::gen::{substituend_pool, substitution_triples};
use crate::report::{Evidence, Report};
use crate::rewrite::{check_substitutive, Calculus, Rule};
use crate::term::{ContextClass, Term};

/// One side of a modular union: either assumed to factorize or backed by
/// oracle evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub assumed: bool,
    pub evidence: Option<Report>,
}

impl Component {
    pub fn assumed(name: &str) -> Component {
        Component {
            name: name.to_string(),
            assumed: true,
            evidence: None,
        }
    }

    pub fn verified(name: &str, evidence: Report) -> Component {
        Component {
            name: name.to_string(),
            assumed: false,
            evidence: Some(evidence),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularSummary {
    pub established: bool,
    pub verdict: String,
    /// Name of the first check that failed, if any.
    pub failing_check: Option<String>,
    pub counterexample: Option<Evidence>,
}

/// Combines component factorization evidence with the two cross swap
/// reports. Failures win over unknowns.
pub fn modular_test(
    components: &[Component],
    swaps: &[Report],
    unknown_tolerance: usize,
) -> ModularSummary {
    let reports: Vec<&Report> = components
        .iter()
        .filter_map(|c| c.evidence.as_ref())
        .chain(swaps.iter())
        .collect();
    if let Some(r) = reports.iter().find(|r| r.refuted()) {
        let ce = r.counterexamples.first().cloned();
        let at = ce
            .as_ref()
            .map(|e| format!(" at {}", e.source))
            .unwrap_or_default();
        return ModularSummary {
            established: false,
            verdict: format!("refuted: {} failed{}", r.check, at),
            failing_check: Some(r.check.clone()),
            counterexample: ce,
        };
    }
    // Oracle evidence may carry a few unknowns; swap reports may not.
    let over = components
        .iter()
        .filter_map(|c| c.evidence.as_ref())
        .find(|r| !r.passed(unknown_tolerance))
        .or_else(|| swaps.iter().find(|r| !r.passed(0)));
    if let Some(r) = over {
        return ModularSummary {
            established: false,
            verdict: format!(
                "inconclusive: {} has {} unknown verdicts",
                r.check, r.counts.unknown
            ),
            failing_check: Some(r.check.clone()),
            counterexample: r.counterexamples.first().cloned(),
        };
    }
    let names: Vec<String> = components
        .iter()
        .map(|c| {
            if c.assumed {
                format!("{} (assumed)", c.name)
            } else {
                c.name.clone()
            }
        })
        .collect();
    ModularSummary {
        established: true,
        verdict: format!("established at corpus scale for {}", names.join(" ∪ ")),
        failing_check: None,
        counterexample: None,
    }
}

/// The three sub-check reports of a modular test and their combination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestReport {
    pub name: String,
    pub subchecks: Vec<Report>,
    pub summary: ModularSummary,
}

impl TestReport {
    /// 1-based index of the first sub-check that failed definitely.
    pub fn failing_subcheck(&self) -> Option<usize> {
        self.failing_subchecks().first().copied()
    }

    /// 1-based indices of every sub-check that failed definitely.
    pub fn failing_subchecks(&self) -> Vec<usize> {
        (1..=self.subchecks.len())
            .filter(|&i| self.subchecks[i - 1].refuted())
            .collect()
    }
}

fn free_vars_of(corpus: &[Term]) -> Vec<String> {
    let set: BTreeSet<String> = corpus
        .iter()
        .flat_map(|t| t.free_vars().into_iter().map(|s| s.as_str().to_string()))
        .collect();
    set.into_iter().collect()
}

fn substitutivity(rules: &[Rule], corpus: &[Term], values_only: bool, limit: usize) -> Report {
    let fv = free_vars_of(corpus);
    let pool = substituend_pool(&fv, values_only);
    let mut out: Option<Report> = None;
    for &r in rules {
        let redexes: Vec<Term> = corpus
            .iter()
            .filter(|t| !r.apply(t).is_empty())
            .cloned()
            .collect();
        let mut rep =
            check_substitutive(r, &substitution_triples(&redexes, &fv, &pool)).with_limit(limit);
        rep.corpus = format!(
            "{} redexes × {} vars × {} substituends",
            redexes.len(),
            fv.len(),
            pool.len()
        );
        match &mut out {
            None => out = Some(rep),
            Some(acc) => {
                acc.check = format!("{}+{}", acc.check, r.name());
                acc.merge(rep);
            }
        }
    }
    let mut rep = out.unwrap_or_else(|| Report::new("substitutive", "", "no rules"));
    rep.calculus = component_name(rules);
    rep
}

fn component_name(rules: &[Rule]) -> String {
    rules.iter().map(|r| r.name()).collect::<Vec<_>>().join("+")
}

fn run_test(
    name: String,
    base: Rule,
    gammas: &[Rule],
    essential: ContextClass,
    root_swap: SwapCheck,
    corpus: &[Term],
    bounds: &Bounds,
) -> TestReport {
    let values_only = base.is_call_by_value();
    let gamma_cal = Calculus::new(&component_name(gammas), gammas, essential);
    let oracle_name = format!("{}-factorization:{}", essential, gamma_cal.name);
    let mut sub1 = check_factorization(
        &TermView::new(gamma_cal.clone()),
        &oracle_name,
        &gamma_cal.name,
        corpus,
        bounds,
    );
    sub1.check = oracle_name;
    let mut sub2 = check_swap(&root_swap, corpus, bounds.budget, bounds.evidence_limit);
    sub2.calculus = format!("{}+{}", base.name(), gamma_cal.name);
    sub2.corpus = format!("{} terms, path_bound={}", corpus.len(), bounds.path_bound);
    let sub3 = substitutivity(gammas, corpus, values_only, bounds.evidence_limit);
    let components = [
        Component::assumed(base.name()),
        Component::verified(&gamma_cal.name, sub1.clone()),
    ];
    // The root swap lifts to the contextual swap; substitutivity gives the
    // reverse swap.
    let summary = modular_test(
        &components,
        &[sub2.clone(), sub3.clone()],
        bounds.unknown_tolerance,
    );
    TestReport {
        name,
        subchecks: vec![sub1, sub2, sub3],
        summary,
    }
}

/// Head test for β ∪ γ: head factorization of γ, the root swap
/// ¬hβ·↦γ ⊆ →hγ·→β*, and substitutivity of γ.
pub fn head_test(gamma: Rule, corpus: &[Term], bounds: &Bounds) -> TestReport {
    let swap = SwapCheck::root_linear_swap(
        &[Rule::Beta],
        &[gamma],
        ContextClass::Head,
        bounds.path_bound,
    );
    head_test_with(gamma, swap, corpus, bounds)
}

/// [`head_test`] with a custom root swap, for calculi with a sharper closing.
pub fn head_test_with(
    gamma: Rule,
    root_swap: SwapCheck,
    corpus: &[Term],
    bounds: &Bounds,
) -> TestReport {
    run_test(
        format!("head-test:{}", gamma.name()),
        Rule::Beta,
        &[gamma],
        ContextClass::Head,
        root_swap,
        corpus,
        bounds,
    )
}

/// Left or weak test for βv ∪ γs with value substituends.
pub fn leftweak_test(
    gammas: &[Rule],
    essential: ContextClass,
    corpus: &[Term],
    bounds: &Bounds,
) -> TestReport {
    let swap = SwapCheck::root_linear_swap(&[Rule::BetaV], gammas, essential, bounds.path_bound);
    leftweak_test_with(gammas, essential, swap, corpus, bounds)
}

pub fn leftweak_test_with(
    gammas: &[Rule],
    essential: ContextClass,
    root_swap: SwapCheck,
    corpus: &[Term],
    bounds: &Bounds,
) -> TestReport {
    assert!(
        matches!(essential, ContextClass::Left | ContextClass::Weak),
        "left/weak test needs a left or weak class"
    );
    run_test(
        format!("{}-test:{}", essential, component_name(gammas)),
        Rule::BetaV,
        gammas,
        essential,
        root_swap,
        corpus,
        bounds,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn eta_fails_at_root_swap() {
        let t = parse("λx.(λz.z) (λz.z) ((λz.z) x)").unwrap();
        let r = head_test(Rule::Eta, &[t], &Bounds::default());
        assert_eq!(r.failing_subchecks(), [2]);
        assert!(!r.summary.established);
        assert!(r.summary.verdict.starts_with("refuted"));
    }

    #[test]
    fn oplus_small_corpus_establishes() {
        let corpus: Vec<Term> = [
            "oplus ((λx.x) p) q",
            "(λx.x x) (oplus p q)",
            "oplus p q ((λy.y) p)",
        ]
        .iter()
        .map(|s| parse(s).unwrap())
        .collect();
        let r = head_test(Rule::Oplus, &corpus, &Bounds::default());
        assert!(r.summary.established, "{}", r.summary.verdict);
        assert!(r.subchecks.iter().all(|s| s.counts.peaks > 0));
    }

    #[test]
    fn unknown_is_inconclusive() {
        let mut rep = Report::new("x", "", "");
        rep.counts.unknown = 1;
        let s = modular_test(&[Component::verified("g", rep)], &[], 0);
        assert!(s.verdict.starts_with("inconclusive"));
        let s = modular_test(&[Component::assumed("b")], &[], 0);
        assert!(s.established);
    }
}
