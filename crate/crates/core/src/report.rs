//! Check reports shared by every checker.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_EVIDENCE_LIMIT: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Corpus items examined (terms, triples, distributions).
    pub items: usize,
    /// Obligations found: peaks, endpoints, redexes.
    pub peaks: usize,
    pub closed: usize,
    pub failed: usize,
    pub unknown: usize,
}

impl Counts {
    fn add(&mut self, o: &Counts) {
        self.items += o.items;
        self.peaks += o.peaks;
        self.closed += o.closed;
        self.failed += o.failed;
        self.unknown += o.unknown;
    }
}

/// A step in serialized form. `target` is canonical text.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: String,
    pub at: String,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub essential: Option<bool>,
}

/// A peak together with its closing path (empty when none was found).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Evidence {
    pub size: usize,
    pub source: String,
    pub peak: Vec<StepRecord>,
    pub closing: Vec<StepRecord>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Telemetry {
    pub wall_ms: u64,
    pub states: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub calculus: String,
    pub corpus: String,
    pub counts: Counts,
    pub witnesses: Vec<Evidence>,
    /// Failures first, then unknowns, each sorted by source size.
    pub counterexamples: Vec<Evidence>,
    pub evidence_limit: usize,
    pub telemetry: Telemetry,
}

/// Per-obligation outcome fed into a report.
pub enum Outcome {
    Closed(Evidence),
    Failed(Evidence),
    Unknown(Evidence),
}

impl Report {
    pub fn new(check: &str, calculus: &str, corpus: &str) -> Report {
        Report {
            check: check.to_string(),
            calculus: calculus.to_string(),
            corpus: corpus.to_string(),
            counts: Counts::default(),
            witnesses: Vec::new(),
            counterexamples: Vec::new(),
            evidence_limit: DEFAULT_EVIDENCE_LIMIT,
            telemetry: Telemetry::default(),
        }
    }

    pub fn with_limit(mut self, limit: usize) -> Report {
        self.evidence_limit = limit;
        self
    }

    pub fn empty_like(&self) -> Report {
        Report::new(&self.check, &self.calculus, &self.corpus).with_limit(self.evidence_limit)
    }

    pub fn record(&mut self, o: Outcome) {
        self.counts.peaks += 1;
        match o {
            Outcome::Closed(e) => {
                self.counts.closed += 1;
                if self.witnesses.len() < self.evidence_limit {
                    self.witnesses.push(e);
                }
            }
            Outcome::Failed(e) => {
                self.counts.failed += 1;
                self.counterexamples.push(e);
            }
            Outcome::Unknown(mut e) => {
                self.counts.unknown += 1;
                if e.note.is_empty() {
                    e.note = "unknown".to_string();
                }
                self.counterexamples.push(e);
            }
        }
        self.trim();
    }

    /// Concatenates another report over a later slice of the same corpus.
    pub fn merge(&mut self, other: Report) {
        self.counts.add(&other.counts);
        let room = self.evidence_limit.saturating_sub(self.witnesses.len());
        self.witnesses
            .extend(other.witnesses.into_iter().take(room));
        self.counterexamples.extend(other.counterexamples);
        self.telemetry.states += other.telemetry.states;
        self.telemetry.wall_ms = self.telemetry.wall_ms.max(other.telemetry.wall_ms);
        self.trim();
    }

    fn trim(&mut self) {
        if self.counterexamples.len() > 1 {
            self.counterexamples
                .sort_by(|a, b| (is_unknown(a), a).cmp(&(is_unknown(b), b)));
        }
        self.counterexamples.truncate(self.evidence_limit.max(1));
    }

    /// No failures, and unknowns within tolerance.
    pub fn passed(&self, unknown_tolerance: usize) -> bool {
        self.counts.failed == 0 && self.counts.unknown <= unknown_tolerance
    }

    /// Some obligation failed definitely.
    pub fn refuted(&self) -> bool {
        self.counts.failed > 0
    }

    /// JSON with the telemetry block zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.telemetry = Telemetry::default();
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        let c = &self.counts;
        format!(
            "{} [{}]: items={} peaks={} closed={} failed={} unknown={}",
            self.check, self.calculus, c.items, c.peaks, c.closed, c.failed, c.unknown
        )
    }
}

fn is_unknown(e: &Evidence) -> bool {
    e.note.starts_with("unknown")
}

/// Runs `f` over `items` in parallel chunks and merges the partial reports
/// in corpus order, so the result does not depend on scheduling.
pub fn run_over<T, F>(items: &[T], template: &Report, f: F) -> Report
where
    T: Sync,
    F: Fn(&T, &mut Report) + Sync,
{
    let start = Instant::now();
    let parts: Vec<Report> = items
        .par_chunks(32)
        .map(|chunk| {
            let mut r = template.empty_like();
            for it in chunk {
                r.counts.items += 1;
                f(it, &mut r);
            }
            r
        })
        .collect();
    let mut out = template.empty_like();
    for p in parts {
        out.merge(p);
    }
    out.telemetry.wall_ms = start.elapsed().as_millis() as u64;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(size: usize, src: &str) -> Evidence {
        Evidence {
            size,
            source: src.to_string(),
            peak: vec![],
            closing: vec![],
            note: String::new(),
        }
    }

    #[test]
    fn counterexamples_sorted_by_size() {
        let mut r = Report::new("c", "k", "corpus");
        r.record(Outcome::Failed(ev(9, "b")));
        r.record(Outcome::Failed(ev(7, "a")));
        r.record(Outcome::Unknown(ev(1, "u")));
        let sizes: Vec<_> = r.counterexamples.iter().map(|e| e.size).collect();
        assert_eq!(sizes, [7, 9, 1]);
        assert_eq!(r.counts.failed, 2);
        assert_eq!(r.counts.unknown, 1);
        assert!(!r.passed(5));
    }

    #[test]
    fn merge_is_associative_on_counts_and_evidence() {
        let mk = |n: usize| {
            let mut r = Report::new("c", "k", "corpus").with_limit(2);
            r.record(Outcome::Closed(ev(n, "w")));
            r.record(Outcome::Failed(ev(n, "f")));
            r
        };
        let mut ab = mk(1);
        ab.merge(mk(2));
        ab.merge(mk(3));
        let mut bc = mk(2);
        bc.merge(mk(3));
        let mut a = mk(1);
        a.merge(bc);
        assert_eq!(ab, a);
        assert_eq!(ab.counts.peaks, 6);
        assert_eq!(ab.witnesses.len(), 2);
    }
}
