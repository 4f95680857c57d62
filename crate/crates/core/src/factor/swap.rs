use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::report::{run_over, Evidence, Outcome, Report};
use crate::rewrite::{record_of, steps_of, Calculus, Rule, Step, StepFilter};
use crate::term::{AlphaKey, ContextClass, Term};

/// A step relation on terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rel {
    /// Contextual closure of `rules`, restricted by context class.
    Closure { rules: Vec<Rule>, filter: Filter },
    /// Root steps only.
    Root { rules: Vec<Rule> },
}

/// Serializable mirror of [`StepFilter`] without the root case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    Any,
    In(ContextClass),
    NotIn(ContextClass),
}

fn sorted(rules: &[Rule]) -> Vec<Rule> {
    let mut v = rules.to_vec();
    v.sort_by_key(|r| r.name());
    v.dedup();
    v
}

impl Rel {
    pub fn any(rules: &[Rule]) -> Rel {
        Rel::Closure {
            rules: sorted(rules),
            filter: Filter::Any,
        }
    }

    pub fn essential(rules: &[Rule], e: ContextClass) -> Rel {
        Rel::Closure {
            rules: sorted(rules),
            filter: Filter::In(e),
        }
    }

    pub fn inessential(rules: &[Rule], e: ContextClass) -> Rel {
        Rel::Closure {
            rules: sorted(rules),
            filter: Filter::NotIn(e),
        }
    }

    pub fn root(rules: &[Rule]) -> Rel {
        Rel::Root {
            rules: sorted(rules),
        }
    }

    pub fn steps(&self, t: &Term) -> Vec<Step> {
        match self {
            Rel::Closure { rules, filter } => {
                let f = match *filter {
                    Filter::Any => StepFilter::Any,
                    Filter::In(c) => StepFilter::In(c),
                    Filter::NotIn(c) => StepFilter::NotIn(c),
                };
                steps_of(rules, t, f)
            }
            Rel::Root { rules } => steps_of(rules, t, StepFilter::Root),
        }
    }

    /// Whether `step` belongs to this relation.
    pub fn admits(&self, step: &Step) -> bool {
        match self {
            Rel::Closure { rules, filter } => {
                rules.contains(&step.rule)
                    && match *filter {
                        Filter::Any => true,
                        Filter::In(c) => step.classes.contains(c),
                        Filter::NotIn(c) => !step.classes.contains(c),
                    }
            }
            Rel::Root { rules } => rules.contains(&step.rule) && step.is_root(),
        }
    }
}

fn rule_list(rules: &[Rule]) -> String {
    rules.iter().map(|r| r.name()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rel::Closure { rules, filter } => match filter {
                Filter::Any => write!(f, "→[{}]", rule_list(rules)),
                Filter::In(c) => write!(f, "→{}[{}]", c, rule_list(rules)),
                Filter::NotIn(c) => write!(f, "→¬{}[{}]", c, rule_list(rules)),
            },
            Rel::Root { rules } => write!(f, "↦[{}]", rule_list(rules)),
        }
    }
}

/// `rel` repeated between `min` and `max` times.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub rel: Rel,
    pub min: usize,
    pub max: usize,
}

impl Segment {
    pub fn once(rel: Rel) -> Segment {
        Segment {
            rel,
            min: 1,
            max: 1,
        }
    }

    pub fn optional(rel: Rel) -> Segment {
        Segment {
            rel,
            min: 0,
            max: 1,
        }
    }

    pub fn upto(rel: Rel, max: usize) -> Segment {
        Segment { rel, min: 0, max }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.min, self.max) {
            (1, 1) => write!(f, "{}", self.rel),
            (0, 1) => write!(f, "{}⁼", self.rel),
            (a, b) => write!(f, "{}^{{{a}..{b}}}", self.rel),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwapKind {
    /// →i·→e ⊆ →e*·→i⁼
    StrongPostponement,
    /// →iα·→eγ ⊆ →eγ·→α*
    LinearSwap,
    /// →¬eα·↦γ ⊆ →eγ·→α*
    RootLinearSwap,
    /// →i·→e ⊆ →e·→i*
    LinearPostponement1,
    /// →i·→e ⊆ →e·→⁼
    LinearPostponement2,
}

impl SwapKind {
    pub fn name(self) -> &'static str {
        match self {
            SwapKind::StrongPostponement => "strong-postponement",
            SwapKind::LinearSwap => "linear-swap",
            SwapKind::RootLinearSwap => "root-linear-swap",
            SwapKind::LinearPostponement1 => "linear-postponement-1",
            SwapKind::LinearPostponement2 => "linear-postponement-2",
        }
    }
}

/// A peak shape `first · second` and the closing shape searched for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapCheck {
    pub name: String,
    pub kind: SwapKind,
    pub first: Rel,
    pub second: Rel,
    pub closing: Vec<Segment>,
}

impl SwapCheck {
    fn build(kind: SwapKind, first: Rel, second: Rel, closing: Vec<Segment>) -> SwapCheck {
        let mut c = SwapCheck {
            name: String::new(),
            kind,
            first,
            second,
            closing,
        };
        c.name = c.describe();
        c
    }

    pub fn describe(&self) -> String {
        let closing: Vec<String> = self.closing.iter().map(|s| s.to_string()).collect();
        format!(
            "{}: {}·{} ⊆ {}",
            self.kind.name(),
            self.first,
            self.second,
            closing.join("·")
        )
    }

    pub fn strong_postponement(cal: &Calculus, bound: usize) -> SwapCheck {
        let e = cal.essential;
        SwapCheck::build(
            SwapKind::StrongPostponement,
            Rel::inessential(&cal.rules, e),
            Rel::essential(&cal.rules, e),
            vec![
                Segment::upto(Rel::essential(&cal.rules, e), bound),
                Segment::optional(Rel::inessential(&cal.rules, e)),
            ],
        )
    }

    pub fn linear_postponement1(cal: &Calculus, bound: usize) -> SwapCheck {
        let e = cal.essential;
        SwapCheck::build(
            SwapKind::LinearPostponement1,
            Rel::inessential(&cal.rules, e),
            Rel::essential(&cal.rules, e),
            vec![
                Segment::once(Rel::essential(&cal.rules, e)),
                Segment::upto(Rel::inessential(&cal.rules, e), bound),
            ],
        )
    }

    pub fn linear_postponement2(cal: &Calculus) -> SwapCheck {
        let e = cal.essential;
        SwapCheck::build(
            SwapKind::LinearPostponement2,
            Rel::inessential(&cal.rules, e),
            Rel::essential(&cal.rules, e),
            vec![
                Segment::once(Rel::essential(&cal.rules, e)),
                Segment::optional(Rel::any(&cal.rules)),
            ],
        )
    }

    /// →¬eα·→eγ ⊆ →eγ·→α^{0..bound}
    pub fn linear_swap(alpha: &[Rule], gamma: &[Rule], e: ContextClass, bound: usize) -> SwapCheck {
        SwapCheck::build(
            SwapKind::LinearSwap,
            Rel::inessential(alpha, e),
            Rel::essential(gamma, e),
            vec![
                Segment::once(Rel::essential(gamma, e)),
                Segment::upto(Rel::any(alpha), bound),
            ],
        )
    }

    /// →¬eα·↦γ ⊆ →eγ·→α^{0..bound}
    pub fn root_linear_swap(
        alpha: &[Rule],
        gamma: &[Rule],
        e: ContextClass,
        bound: usize,
    ) -> SwapCheck {
        SwapCheck::build(
            SwapKind::RootLinearSwap,
            Rel::inessential(alpha, e),
            Rel::root(gamma),
            vec![
                Segment::once(Rel::essential(gamma, e)),
                Segment::upto(Rel::any(alpha), bound),
            ],
        )
    }

    /// Replaces the closing shape, keeping the peak.
    pub fn with_closing(mut self, closing: Vec<Segment>) -> SwapCheck {
        self.closing = closing;
        self.name = self.describe();
        self
    }

    pub fn named(mut self, name: &str) -> SwapCheck {
        self.name = name.to_string();
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Closing {
    Closed(Vec<Step>),
    /// The bounded search finished without reaching the target.
    Failed {
        explored: usize,
    },
    Unknown {
        explored: usize,
    },
}

struct Node {
    term: Term,
    step: Option<Step>,
    parent: Option<Rc<Node>>,
}

fn chain_of(mut n: &Rc<Node>) -> Vec<Step> {
    let mut out = Vec::new();
    loop {
        if let Some(s) = &n.step {
            out.push(s.clone());
        }
        match &n.parent {
            Some(p) => n = p,
            None => break,
        }
    }
    out.reverse();
    out
}

/// Searches a path from `from` to (the α-class of) `target` matching the
/// segments in order, breadth-first within each segment.
pub fn find_closing(
    from: &Term,
    target: &AlphaKey,
    segments: &[Segment],
    budget: usize,
) -> Closing {
    let mut frontier = vec![Rc::new(Node {
        term: from.clone(),
        step: None,
        parent: None,
    })];
    let mut explored = 1usize;
    let last = segments.len().saturating_sub(1);
    if segments.is_empty() {
        return if &from.alpha_key() == target {
            Closing::Closed(Vec::new())
        } else {
            Closing::Failed { explored }
        };
    }
    for (si, seg) in segments.iter().enumerate() {
        let is_last = si == last;
        let mut out: Vec<Rc<Node>> = Vec::new();
        let mut out_keys: HashSet<AlphaKey> = HashSet::new();
        let mut seen: HashSet<(AlphaKey, usize)> = HashSet::new();
        let mut layer = frontier;
        for n in &layer {
            seen.insert((n.term.alpha_key(), 0));
        }
        for depth in 0..=seg.max {
            if depth > 0 {
                let mut next = Vec::new();
                for n in &layer {
                    for step in seg.rel.steps(&n.term) {
                        let k = step.target.alpha_key();
                        if seen.insert((k, depth.min(seg.min))) {
                            explored += 1;
                            if explored > budget {
                                return Closing::Unknown { explored };
                            }
                            next.push(Rc::new(Node {
                                term: step.target.clone(),
                                step: Some(step),
                                parent: Some(n.clone()),
                            }));
                        }
                    }
                }
                layer = next;
            }
            if depth >= seg.min {
                for n in &layer {
                    let k = n.term.alpha_key();
                    if is_last && &k == target {
                        return Closing::Closed(chain_of(n));
                    }
                    if out_keys.insert(k) {
                        out.push(n.clone());
                    }
                }
            }
            if layer.is_empty() {
                break;
            }
        }
        frontier = out;
        if frontier.is_empty() {
            break;
        }
    }
    Closing::Failed { explored }
}

/// Checks every peak `t →first u →second s` over the corpus for a closing
/// path from `t` to `s` of the configured shape.
pub fn check_swap(
    check: &SwapCheck,
    corpus: &[Term],
    budget: usize,
    evidence_limit: usize,
) -> Report {
    let template = Report::new(&check.name, "", "corpus").with_limit(evidence_limit);
    run_over(corpus, &template, |t, rep| {
        let mut cache: HashMap<AlphaKey, Closing> = HashMap::new();
        for s1 in check.first.steps(t) {
            for s2 in check.second.steps(&s1.target) {
                let key = s2.target.alpha_key();
                let closing = cache
                    .entry(key.clone())
                    .or_insert_with(|| find_closing(t, &key, &check.closing, budget))
                    .clone();
                let mut ev = Evidence {
                    size: t.size(),
                    source: t.to_string(),
                    peak: vec![record_of(&s1, None), record_of(&s2, None)],
                    closing: Vec::new(),
                    note: String::new(),
                };
                let outcome = match closing {
                    Closing::Closed(chain) => {
                        rep.telemetry.states += chain.len() as u64;
                        ev.closing = chain.iter().map(|s| record_of(s, None)).collect();
                        Outcome::Closed(ev)
                    }
                    Closing::Failed { explored } => {
                        rep.telemetry.states += explored as u64;
                        ev.note = format!("no closing path within bounds ({explored} states)");
                        Outcome::Failed(ev)
                    }
                    Closing::Unknown { explored } => {
                        rep.telemetry.states += explored as u64;
                        ev.note = format!("unknown: budget hit at {explored} states");
                        Outcome::Unknown(ev)
                    }
                };
                rep.record(outcome);
            }
        }
    })
}

/// Failing peaks of `check` ordered by source size, smallest first.
pub fn search_counterexample(
    check: &SwapCheck,
    corpus: &[Term],
    budget: usize,
    limit: usize,
) -> Report {
    let mut sorted: Vec<Term> = corpus.to_vec();
    sorted.sort_by_key(|t| t.size());
    let mut rep = check_swap(check, &sorted, budget, limit);
    rep.check = format!("search-counterexample {}", check.name);
    rep
}

/// Closes `t →a^k u →b s` peaks (k up to `max_chain`) by composing
/// single-peak closings of shape b·c*, innermost first. Needs a check whose
/// closing starts with exactly one step of the peak's second relation.
pub fn check_composed_swap(
    check: &SwapCheck,
    corpus: &[Term],
    max_chain: usize,
    budget: usize,
) -> Report {
    let template = Report::new(&format!("composed({})", check.name), "", "corpus");
    let composable = check
        .closing
        .first()
        .map(|s| s.rel == check.second && s.min == 1 && s.max == 1)
        == Some(true);
    run_over(corpus, &template, |t, rep| {
        if !composable {
            return;
        }
        let mut chains: Vec<Vec<Step>> =
            check.first.steps(t).into_iter().map(|s| vec![s]).collect();
        for _ in 2..=max_chain {
            let mut longer = Vec::new();
            for c in &chains {
                for s in check.first.steps(&c.last().expect("non-empty").target) {
                    let mut c2 = c.clone();
                    c2.push(s);
                    longer.push(c2);
                }
            }
            if longer.is_empty() {
                break;
            }
            for a_chain in &longer {
                let end = &a_chain.last().expect("non-empty").target;
                for b in check.second.steps(end) {
                    rep.record(compose(check, t, a_chain, b, budget));
                }
            }
            chains = longer;
        }
    })
}

fn compose(check: &SwapCheck, t: &Term, a_chain: &[Step], b: Step, budget: usize) -> Outcome {
    let mut ev = Evidence {
        size: t.size(),
        source: t.to_string(),
        peak: a_chain
            .iter()
            .chain(std::iter::once(&b))
            .map(|s| record_of(s, None))
            .collect(),
        closing: Vec::new(),
        note: String::new(),
    };
    let target = b.target.clone();
    // Current peak: a_chain[i] followed by `b_step`, then `tail` (c-steps) to the target.
    let mut b_step = b;
    let mut tail: Vec<Step> = Vec::new();
    for a in a_chain.iter().rev() {
        let key = b_step.target.alpha_key();
        match find_closing(&a.source, &key, &check.closing, budget) {
            Closing::Closed(mut chain) => {
                let rest = chain.split_off(1);
                b_step = chain.pop().expect("closing starts with one step");
                tail.splice(0..0, rest);
            }
            Closing::Failed { .. } => {
                ev.note = "a single-peak closing failed".into();
                return Outcome::Failed(ev);
            }
            Closing::Unknown { explored } => {
                ev.note = format!("unknown: budget hit at {explored} states");
                return Outcome::Unknown(ev);
            }
        }
    }
    let c_rel = check.closing.get(1).map(|s| &s.rel);
    let shaped =
        check.second.admits(&b_step) && tail.iter().all(|s| c_rel.is_some_and(|r| r.admits(s)));
    let mut full = vec![b_step];
    full.extend(tail);
    ev.closing = full.iter().map(|s| record_of(s, None)).collect();
    let chained = full.windows(2).all(|w| w[0].target.alpha_eq(&w[1].source))
        && full[0].source.alpha_eq(t)
        && full.last().expect("non-empty").target.alpha_eq(&target);
    if shaped && chained {
        Outcome::Closed(ev)
    } else {
        ev.note = "composed witness is not of shape b·c*".into();
        Outcome::Failed(ev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    #[test]
    fn strong_postponement_fails_on_duplication() {
        let cal = Calculus::new("beta", &[Rule::Beta], ContextClass::Head);
        let check = SwapCheck::strong_postponement(&cal, 6);
        let t = parse("(λx.x x x) ((λz.z) z)").unwrap();
        let r = check_swap(&check, &[t], 100_000, 16);
        assert!(r.counts.failed >= 1);
        assert!(r.counterexamples[0].peak[1].target == "z z z");
    }

    #[test]
    fn oplus_root_swap_closes() {
        let check =
            SwapCheck::root_linear_swap(&[Rule::Beta], &[Rule::Oplus], ContextClass::Head, 1);
        let t = parse("oplus ((λx.x) p) q").unwrap();
        let r = check_swap(&check, &[t], 1000, 16);
        assert_eq!(r.counts.peaks, 2);
        assert_eq!(r.counts.failed, 0);
    }

    #[test]
    fn eta_root_swap_fails_on_fixture() {
        let check = SwapCheck::root_linear_swap(&[Rule::Beta], &[Rule::Eta], ContextClass::Head, 6);
        let t = parse("λx.(λz.z) (λz.z) ((λz.z) x)").unwrap();
        let r = check_swap(&check, &[t], 100_000, 16);
        assert_eq!(r.counts.failed, 1);
        assert_eq!(r.counterexamples[0].peak[1].target, "(λz.z) (λz.z)");
    }

    #[test]
    fn closing_with_empty_segments() {
        let t = parse("x").unwrap();
        assert_eq!(
            find_closing(&t, &t.alpha_key(), &[], 10),
            Closing::Closed(vec![])
        );
    }

    #[test]
    fn composition_of_oplus_swaps() {
        let check = SwapCheck::linear_swap(&[Rule::Beta], &[Rule::Oplus], ContextClass::Head, 6);
        let t = parse("oplus ((λx.x) ((λy.y) p)) q").unwrap();
        let r = check_composed_swap(&check, &[t], 2, 10_000);
        assert!(r.counts.peaks > 0);
        assert_eq!(r.counts.failed, 0);
    }
}
