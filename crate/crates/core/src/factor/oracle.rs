use std::collections::{HashMap, HashSet, VecDeque};

use super::{reorder_sequence, replay_to, Ars, Bounds, Reordered, Side};
use crate::report::{run_over, Evidence, Outcome, Report};

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<S> {
    /// A factorized path, essential steps first.
    Holds { witness: Vec<S> },
    /// The whole e*-then-i* reachable set was explored and misses the endpoint.
    Refuted { explored: usize },
    /// The budget ran out first.
    Unknown { explored: usize, depth: usize },
}

impl<S> Verdict<S> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
}

/// Verdict for one endpoint reachable from the start state, together with
/// the mixed sequence that first reached it.
pub struct EndpointVerdict<A: Ars> {
    pub endpoint: A::State,
    pub sequence: Vec<A::Step>,
    pub verdict: Verdict<A::Step>,
}

pub struct OracleRun<A: Ars> {
    pub start: A::State,
    pub endpoints: Vec<EndpointVerdict<A>>,
    /// States of the e*-then-i* search.
    pub explored: usize,
    /// Whether that search exhausted its reachable set.
    pub closed: bool,
}

impl<A: Ars> OracleRun<A> {
    pub fn verdict_for(&self, ars: &A, s: &A::State) -> Option<&Verdict<A::Step>> {
        let k = ars.key(s);
        self.endpoints
            .iter()
            .find(|e| ars.key(&e.endpoint) == k)
            .map(|e| &e.verdict)
    }
}

/// States reachable in 1..=depth steps of either side, each with the first
/// (shortest) sequence found, in breadth-first order. The start is excluded.
pub fn reachable<A: Ars>(ars: &A, start: &A::State, depth: usize) -> Vec<(A::State, Vec<A::Step>)> {
    let mut seen = HashSet::new();
    seen.insert(ars.key(start));
    let mut layer: Vec<(A::State, Vec<A::Step>)> = vec![(start.clone(), Vec::new())];
    let mut out = Vec::new();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (s, path) in &layer {
            for step in ars.all_steps(s) {
                let t = ars.target(&step);
                if seen.insert(ars.key(t)) {
                    let mut p = path.clone();
                    p.push(step.clone());
                    next.push((t.clone(), p));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub(crate) struct PathSearch<S> {
    pub found: Vec<Option<Vec<S>>>,
    pub explored: usize,
    pub closed: bool,
    pub depth: usize,
}

struct Node<St, S> {
    state: St,
    phase: Side,
    parent: Option<usize>,
    via: Option<S>,
    depth: usize,
}

/// Shortest paths of shape e*·i* from `start` to each target, by a 0-1
/// breadth-first search over (state, phase) where switching from the
/// essential to the inessential phase costs nothing.
pub(crate) fn factorized_paths<A: Ars>(
    ars: &A,
    start: &A::State,
    targets: &[A::Key],
    budget: usize,
) -> PathSearch<A::Step> {
    let mut wanted: HashMap<&A::Key, Vec<usize>> = HashMap::new();
    for (i, k) in targets.iter().enumerate() {
        wanted.entry(k).or_default().push(i);
    }
    let mut found: Vec<Option<Vec<A::Step>>> = vec![None; targets.len()];
    let mut missing = targets.len();
    let mut arena: Vec<Node<A::State, A::Step>> = vec![Node {
        state: start.clone(),
        phase: Side::Essential,
        parent: None,
        via: None,
        depth: 0,
    }];
    let mut visited: HashSet<(A::Key, Side)> = HashSet::new();
    visited.insert((ars.key(start), Side::Essential));
    let mut queue = VecDeque::from([0usize]);
    let mut max_depth = 0;
    let mut closed = true;

    while let Some(i) = queue.pop_front() {
        if missing == 0 {
            break;
        }
        let key = ars.key(&arena[i].state);
        max_depth = max_depth.max(arena[i].depth);
        if let Some(idxs) = wanted.remove(&key) {
            let path = path_to(&arena, i);
            for j in idxs {
                found[j] = Some(path.clone());
                missing -= 1;
            }
            if missing == 0 {
                break;
            }
        }
        if arena.len() > budget {
            closed = false;
            break;
        }
        let phase = arena[i].phase;
        if phase == Side::Essential && visited.insert((key, Side::Inessential)) {
            arena.push(Node {
                state: arena[i].state.clone(),
                phase: Side::Inessential,
                parent: Some(i),
                via: None,
                depth: arena[i].depth,
            });
            queue.push_front(arena.len() - 1);
        }
        for step in ars.steps(&arena[i].state, phase) {
            let t = ars.target(&step);
            if visited.insert((ars.key(t), phase)) {
                arena.push(Node {
                    state: t.clone(),
                    phase,
                    parent: Some(i),
                    via: Some(step.clone()),
                    depth: arena[i].depth + 1,
                });
                queue.push_back(arena.len() - 1);
            }
        }
    }
    if missing > 0 && !queue.is_empty() {
        closed = false;
    }
    PathSearch {
        found,
        explored: arena.len(),
        closed,
        depth: max_depth,
    }
}

fn path_to<St, S: Clone>(arena: &[Node<St, S>], mut i: usize) -> Vec<S> {
    let mut out = Vec::new();
    loop {
        let n = &arena[i];
        if let Some(s) = &n.via {
            out.push(s.clone());
        }
        match n.parent {
            Some(p) => i = p,
            None => break,
        }
    }
    out.reverse();
    out
}

/// For every state reachable from `start` in at most `seq_depth` mixed steps,
/// looks for an e*-then-i* path to it. The recorded mixed sequence is first
/// reordered by local swaps; endpoints left open go to a forward search of
/// at most `budget` states. Only an exhaustive forward search can refute.
pub fn factorization_oracle<A: Ars>(
    ars: &A,
    start: &A::State,
    seq_depth: usize,
    budget: usize,
) -> OracleRun<A> {
    let ends = reachable(ars, start, seq_depth.max(1));
    let mut witnesses: Vec<Option<Vec<A::Step>>> = ends
        .iter()
        .map(|(_, seq)| match reorder_sequence(ars, start, seq, budget) {
            Ok(Reordered::Factorized(w)) => Some(w),
            _ => None,
        })
        .collect();
    let open: Vec<usize> = (0..ends.len())
        .filter(|&i| witnesses[i].is_none())
        .collect();
    let keys: Vec<A::Key> = open.iter().map(|&i| ars.key(&ends[i].0)).collect();
    let search = if keys.is_empty() {
        PathSearch {
            found: Vec::new(),
            explored: 0,
            closed: true,
            depth: 0,
        }
    } else {
        factorized_paths(ars, start, &keys, budget)
    };
    for (&i, f) in open.iter().zip(search.found) {
        witnesses[i] = f;
    }
    let endpoints = ends
        .into_iter()
        .zip(witnesses)
        .map(|((endpoint, sequence), f)| {
            let verdict = match f {
                Some(witness) => Verdict::Holds { witness },
                None if search.closed => Verdict::Refuted {
                    explored: search.explored,
                },
                None => Verdict::Unknown {
                    explored: search.explored,
                    depth: search.depth,
                },
            };
            EndpointVerdict {
                endpoint,
                sequence,
                verdict,
            }
        })
        .collect();
    OracleRun {
        start: start.clone(),
        endpoints,
        explored: search.explored,
        closed: search.closed,
    }
}

/// Runs the oracle on every corpus state. Each endpoint is one obligation;
/// a `Holds` witness counts only if it replays through the step enumerator.
pub fn check_factorization<A: Ars>(
    ars: &A,
    name: &str,
    calculus: &str,
    corpus: &[A::State],
    bounds: &Bounds,
) -> Report
where
    A::State: Sync,
{
    let template = Report::new(name, calculus, "corpus").with_limit(bounds.evidence_limit);
    let mut rep = run_over(corpus, &template, |t, rep| {
        let run = factorization_oracle(ars, t, bounds.seq_depth, bounds.budget);
        rep.telemetry.states += run.explored as u64;
        for ep in run.endpoints {
            let mut ev = Evidence {
                size: ars.size(t),
                source: ars.show(t),
                peak: ep.sequence.iter().map(|s| ars.record(s)).collect(),
                closing: Vec::new(),
                note: String::new(),
            };
            rep.record(match ep.verdict {
                Verdict::Holds { witness } => {
                    ev.closing = witness.iter().map(|s| ars.record(s)).collect();
                    match replay_to(ars, t, &witness, &ep.endpoint) {
                        Ok(()) => Outcome::Closed(ev),
                        Err(e) => {
                            ev.note = format!("witness does not replay: {e}");
                            Outcome::Failed(ev)
                        }
                    }
                }
                Verdict::Refuted { explored } => {
                    ev.note = format!("refuted after closing {explored} states");
                    Outcome::Failed(ev)
                }
                Verdict::Unknown { explored, depth } => {
                    ev.note = format!("unknown: budget hit at {explored} states, depth {depth}");
                    Outcome::Unknown(ev)
                }
            });
        }
    });
    rep.corpus = format!(
        "{} states, seq_depth={}, budget={}",
        corpus.len(),
        bounds.seq_depth,
        bounds.budget
    );
    rep
}
