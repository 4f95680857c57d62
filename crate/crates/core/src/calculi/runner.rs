use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::catalog::{CatalogEntry, Expected, Suite, SuiteKind};
use super::demo::{demo, Transcript};
use crate::factor::{
    check_composed_swap, check_factorization, check_swap, head_test, head_test_with, leftweak_test,
    Bounds, ModularSummary, Rel, Segment, SwapCheck, TermView, TestReport,
};
use crate::gen::{enumerate, CorpusError, Mode};
use crate::prob::{
    check_embedding, check_mass_conservation, check_prob_factorization, check_prob_surface_swap,
};
use crate::report::{run_over, Evidence, Outcome, Report};
use crate::rewrite::{check_shape_preservation, steps_of, Rule, StepFilter};
use crate::term::{AlphaKey, ContextClass, Parser, Term};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Overrides the entry's corpus size.
    pub max_size: Option<usize>,
    pub bounds: Bounds,
    /// Random corpus instead of exhaustive.
    pub seed: Option<u64>,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            max_size: None,
            bounds: Bounds::default(),
            seed: None,
            samples: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observed {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub calculus: String,
    pub suite: String,
    pub essential: ContextClass,
    pub expected: Expected,
    pub observed: Observed,
    pub matches: bool,
    pub reports: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<ModularSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<Transcript>,
}

impl SuiteResult {
    pub fn line(&self) -> String {
        let status = if self.matches { "ok" } else { "MISMATCH" };
        format!(
            "{status:8} {} {} [{}] expected {:?}, observed {:?}",
            self.calculus, self.suite, self.essential, self.expected, self.observed
        )
    }
}

/// The entry's generated corpus plus its fixtures, without α-duplicates.
pub fn build_corpus(entry: &CatalogEntry, cfg: &RunConfig) -> Result<Vec<Term>, CorpusError> {
    let mut spec = entry.corpus.clone();
    if let Some(n) = cfg.max_size {
        spec.max_size = n;
    }
    if let Some(seed) = cfg.seed {
        spec.mode = Mode::Random {
            seed,
            count: cfg.samples,
        };
    }
    let mut corpus = enumerate(&spec)?;
    let mut seen: HashSet<AlphaKey> = corpus.iter().map(|t| t.alpha_key()).collect();
    let parser = Parser::with_constants(entry.calculus.constants.iter().map(String::as_str));
    for f in &entry.fixtures {
        let t = parser.parse(f).expect("catalog fixtures parse");
        if seen.insert(t.alpha_key()) {
            corpus.push(t);
        }
    }
    Ok(corpus)
}

fn observe(reports: &[Report], tolerance: usize) -> Observed {
    if reports.iter().any(|r| r.refuted()) {
        Observed::Fail
    } else if reports.iter().all(|r| r.passed(tolerance)) {
        Observed::Pass
    } else {
        Observed::Unknown
    }
}

fn from_test(t: TestReport) -> (Vec<Report>, Option<ModularSummary>, Observed, Vec<usize>) {
    let observed = if t.summary.established {
        Observed::Pass
    } else if t.summary.verdict.starts_with("refuted") {
        Observed::Fail
    } else {
        Observed::Unknown
    };
    let at = t.failing_subchecks();
    (t.subchecks, Some(t.summary), observed, at)
}

fn transcript_report(tr: &Transcript) -> Report {
    let mut rep = Report::new(&format!("demo:{}", tr.name), "", "fixture");
    rep.counts.items = 1;
    for c in &tr.checks {
        let ev = Evidence {
            size: 0,
            source: c.label.clone(),
            peak: Vec::new(),
            closing: Vec::new(),
            note: String::new(),
        };
        rep.record(if c.ok {
            Outcome::Closed(ev)
        } else {
            Outcome::Failed(ev)
        });
    }
    rep
}

fn sigma_root_swaps(e: ContextClass, corpus: &[Term], b: &Bounds) -> Vec<Report> {
    let sigma = [Rule::Sigma1, Rule::Sigma3];
    let mut out = Vec::new();
    for i in sigma {
        for gamma in [&[Rule::BetaV][..], &sigma[..]] {
            let g = gamma.iter().map(|r| r.name()).collect::<Vec<_>>().join("+");
            let check = SwapCheck::root_linear_swap(gamma, &[i], e, 1)
                .with_closing(vec![
                    Segment::once(Rel::root(&[i])),
                    Segment::once(Rel::any(gamma)),
                ])
                .named(&format!("root-swap: ¬{e}[{g}]·↦{i} ⊆ ↦{i}·→[{g}]"));
            out.push(check_swap(&check, corpus, b.budget, b.evidence_limit));
        }
    }
    out
}

/// Each σ-closure is finite within the budget and has no cycle.
pub fn check_sigma_termination(corpus: &[Term], budget: usize) -> Report {
    let template = Report::new("sigma-termination", "shuffling", "corpus");
    run_over(corpus, &template, |t, rep| {
        let rules = [Rule::Sigma1, Rule::Sigma3];
        let mut ids: HashMap<AlphaKey, usize> = HashMap::new();
        let mut terms = vec![t.clone()];
        let mut edges: Vec<Vec<usize>> = vec![Vec::new()];
        ids.insert(t.alpha_key(), 0);
        let mut i = 0;
        let mut ev = Evidence {
            size: t.size(),
            source: t.to_string(),
            peak: Vec::new(),
            closing: Vec::new(),
            note: String::new(),
        };
        while i < terms.len() {
            if terms.len() > budget {
                ev.note = format!("unknown: σ-closure exceeds {budget} states");
                rep.record(Outcome::Unknown(ev));
                return;
            }
            for s in steps_of(&rules, &terms[i].clone(), StepFilter::Any) {
                let k = s.target.alpha_key();
                let j = *ids.entry(k).or_insert_with(|| {
                    terms.push(s.target.clone());
                    edges.push(Vec::new());
                    terms.len() - 1
                });
                edges[i].push(j);
            }
            i += 1;
        }
        // Kahn's algorithm: every node is removed iff the graph is acyclic.
        let mut indeg = vec![0usize; terms.len()];
        for es in &edges {
            for &j in es {
                indeg[j] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..terms.len()).filter(|&n| indeg[n] == 0).collect();
        let mut removed = 0;
        while let Some(n) = stack.pop() {
            removed += 1;
            for &j in &edges[n] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        rep.telemetry.states += terms.len() as u64;
        if removed == terms.len() {
            ev.note = format!("closure of {} terms", terms.len());
            rep.record(Outcome::Closed(ev));
        } else {
            ev.note = "σ-closure has a cycle".into();
            rep.record(Outcome::Failed(ev));
        }
    })
}

pub fn run_suite(
    entry: &CatalogEntry,
    suite: &Suite,
    corpus: &[Term],
    cfg: &RunConfig,
) -> SuiteResult {
    let b = &cfg.bounds;
    let e = suite.essential;
    let cal = entry.calculus.with_essential(e);
    let mut summary = None;
    let mut transcript = None;
    let mut failing_at: Vec<usize> = Vec::new();
    let (reports, observed) = match &suite.kind {
        SuiteKind::ShapePreservation => {
            let r = vec![check_shape_preservation(&cal, corpus)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::FactorizationOracle => {
            let name = format!("{e}-factorization-oracle");
            let r = vec![check_factorization(
                &TermView::new(cal.clone()),
                &name,
                &cal.name,
                corpus,
                b,
            )];
            let o = observe(&r, b.unknown_tolerance);
            (r, o)
        }
        SuiteKind::StrongPostponement => {
            let check = SwapCheck::strong_postponement(&cal, b.path_bound);
            let r = vec![check_swap(&check, corpus, b.budget, b.evidence_limit)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::LinearPostponement { rules } => {
            let sub = cal.restrict(&format!("{}-only", cal.name), rules);
            let r = vec![check_swap(
                &SwapCheck::linear_postponement2(&sub),
                corpus,
                b.budget,
                b.evidence_limit,
            )];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::HeadTest { gamma, sharp } => {
            let t = if *sharp {
                let swap =
                    SwapCheck::root_linear_swap(&[Rule::Beta], &[*gamma], ContextClass::Head, 1);
                head_test_with(*gamma, swap, corpus, b)
            } else {
                head_test(*gamma, corpus, b)
            };
            let (r, s, o, at) = from_test(t);
            summary = s;
            failing_at = at;
            (r, o)
        }
        SuiteKind::LeftWeakTest { gammas } => {
            let (r, s, o, at) = from_test(leftweak_test(gammas, e, corpus, b));
            summary = s;
            failing_at = at;
            (r, o)
        }
        SuiteKind::SigmaRootSwaps => {
            let r = sigma_root_swaps(e, corpus, b);
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::SigmaTermination => {
            let r = vec![check_sigma_termination(corpus, b.budget)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::Composition {
            alpha,
            gamma,
            max_chain,
        } => {
            let check = SwapCheck::linear_swap(alpha, gamma, e, b.path_bound);
            let r = vec![check_composed_swap(&check, corpus, *max_chain, b.budget)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::Demo { name } => {
            let tr = demo(name).expect("catalog demos exist");
            let r = vec![transcript_report(&tr)];
            transcript = Some(tr);
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::ProbSurfaceSwap => {
            let r = vec![check_prob_surface_swap(corpus, b)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::ProbFactorization => {
            let r = vec![check_prob_factorization(corpus, b)];
            let o = observe(&r, b.unknown_tolerance);
            (r, o)
        }
        SuiteKind::MassConservation => {
            let r = vec![check_mass_conservation(corpus)];
            let o = observe(&r, 0);
            (r, o)
        }
        SuiteKind::Embedding => {
            let r = vec![check_embedding(corpus)];
            let o = observe(&r, 0);
            (r, o)
        }
    };
    let matches = match suite.expected {
        Expected::Pass => observed == Observed::Pass,
        Expected::Fail => {
            observed == Observed::Fail && suite.fails_at.is_none_or(|n| failing_at.contains(&n))
        }
    };
    SuiteResult {
        calculus: entry.name.clone(),
        suite: suite.id.clone(),
        essential: e,
        expected: suite.expected,
        observed,
        matches,
        reports,
        summary,
        transcript,
    }
}

/// Runs the entry's suites, optionally filtered by id and essential class.
pub fn run_entry(
    entry: &CatalogEntry,
    suite_id: Option<&str>,
    essential: Option<ContextClass>,
    cfg: &RunConfig,
) -> Result<Vec<SuiteResult>, CorpusError> {
    let corpus = build_corpus(entry, cfg)?;
    Ok(entry
        .suites
        .iter()
        .filter(|s| {
            suite_id.is_none_or(|id| s.id == id) && essential.is_none_or(|e| s.essential == e)
        })
        .map(|s| run_suite(entry, s, &corpus, cfg))
        .collect())
}
