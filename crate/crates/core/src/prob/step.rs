use std::fmt;

use serde::{Deserialize, Serialize};

use super::dist::{mdist_scale, mdist_sum, MultiDist, Prob};
use crate::factor::{Ars, Side};
use crate::report::StepRecord;
use crate::rewrite::{steps_of, Rule, StepFilter};
use crate::term::{ContextClass, Dir, Position, Term};

/// Kind of a term-level probabilistic step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbKind {
    /// βv in a weak context.
    SurfaceBetaV,
    /// βv anywhere else: under λ or inside a choice branch.
    DeepBetaV,
    /// Choice in a weak context.
    Oplus,
}

impl ProbKind {
    pub fn name(self) -> &'static str {
        match self {
            ProbKind::SurfaceBetaV => "betav-surface",
            ProbKind::DeepBetaV => "betav-deep",
            ProbKind::Oplus => "oplus",
        }
    }

    pub fn is_surface(self) -> bool {
        !matches!(self, ProbKind::DeepBetaV)
    }
}

/// Term relations that can be lifted to multi-distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftRel {
    /// Any step: βv anywhere or a surface choice.
    Any,
    BetaV,
    SurfaceBetaV,
    DeepBetaV,
    Oplus,
}

impl LiftRel {
    pub fn name(self) -> &'static str {
        match self {
            LiftRel::Any => "any",
            LiftRel::BetaV => "betav",
            LiftRel::SurfaceBetaV => "betav-surface",
            LiftRel::DeepBetaV => "betav-deep",
            LiftRel::Oplus => "oplus",
        }
    }

    fn admits(self, k: ProbKind) -> bool {
        match self {
            LiftRel::Any => true,
            LiftRel::BetaV => k != ProbKind::Oplus,
            LiftRel::SurfaceBetaV => k == ProbKind::SurfaceBetaV,
            LiftRel::DeepBetaV => k == ProbKind::DeepBetaV,
            LiftRel::Oplus => k == ProbKind::Oplus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermProbStep {
    pub kind: ProbKind,
    pub pos: Position,
    pub result: MultiDist,
}

fn choice_positions(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<Position>) {
    match t {
        Term::Choice { .. } => out.push(Position(path.clone())),
        Term::App { fun, arg } => {
            for (d, c) in [(Dir::AppFun, fun), (Dir::AppArg, arg)] {
                path.push(d);
                choice_positions(c, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

/// All one-step reductions of `t`, ordered by position then kind.
pub fn term_prob_steps(t: &Term) -> Vec<TermProbStep> {
    let mut out: Vec<TermProbStep> = steps_of(&[Rule::BetaV], t, StepFilter::Any)
        .into_iter()
        .map(|s| TermProbStep {
            kind: if s.classes.contains(ContextClass::Weak) {
                ProbKind::SurfaceBetaV
            } else {
                ProbKind::DeepBetaV
            },
            pos: s.pos,
            result: MultiDist::dirac(s.target),
        })
        .collect();
    let mut ps = Vec::new();
    choice_positions(t, &mut Vec::new(), &mut ps);
    let half = Prob::new(1, 2);
    for pos in ps {
        let Some(Term::Choice { left, right }) = pos.resolve(t) else {
            unreachable!("choice position resolves to a choice");
        };
        let l = pos.replace(t, (**left).clone()).expect("resolves");
        let r = pos.replace(t, (**right).clone()).expect("resolves");
        let result = MultiDist::new(vec![(half, l), (half, r)]).expect("mass 1");
        out.push(TermProbStep {
            kind: ProbKind::Oplus,
            pos,
            result,
        });
    }
    out.sort_by(|a, b| a.pos.0.cmp(&b.pos.0).then(a.kind.cmp(&b.kind)));
    out
}

/// A lifted step: each entry either stays (`None`) or takes the indexed
/// term step of the lifted relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbStep {
    pub rel: LiftRel,
    pub source: MultiDist,
    pub moves: Vec<Option<usize>>,
    pub target: MultiDist,
}

impl fmt::Display for ProbStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⇛{} {}", self.source, self.rel.name(), self.target)
    }
}

fn moves_label(moves: &[Option<usize>]) -> String {
    moves
        .iter()
        .map(|m| m.map_or("-".to_string(), |i| i.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

/// Every lift of `rel` out of `m`: each entry stays or takes one step, and
/// at least one entry moves. Odometer order over entries, staying first.
pub fn lift(rel: LiftRel, m: &MultiDist) -> Vec<ProbStep> {
    let options: Vec<Vec<TermProbStep>> = m
        .entries()
        .iter()
        .map(|e| {
            term_prob_steps(&e.term)
                .into_iter()
                .filter(|s| rel.admits(s.kind))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    if options.iter().all(|o| o.is_empty()) {
        return out;
    }
    let mut choice: Vec<usize> = vec![0; options.len()];
    loop {
        if choice.iter().any(|&c| c > 0) {
            let mut target = MultiDist::default();
            for (i, e) in m.entries().iter().enumerate() {
                let part = match choice[i] {
                    0 => MultiDist::dirac(e.term.clone()),
                    c => options[i][c - 1].result.clone(),
                };
                let scaled = mdist_scale(e.p, &part).expect("entry probability in (0,1]");
                target = mdist_sum(&target, &scaled).expect("lifting preserves mass");
            }
            out.push(ProbStep {
                rel,
                source: m.clone(),
                moves: choice.iter().map(|&c| c.checked_sub(1)).collect(),
                target,
            });
        }
        let mut i = choice.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if choice[i] < options[i].len() {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
        }
    }
}

/// The probabilistic calculus with the surface partition: essential steps
/// lift surface βv or choice, inessential ones lift deep βv.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProbView;

impl Ars for ProbView {
    type State = MultiDist;
    type Key = super::dist::DistKey;
    type Step = ProbStep;

    fn key(&self, s: &MultiDist) -> Self::Key {
        s.key()
    }

    fn steps(&self, s: &MultiDist, side: Side) -> Vec<ProbStep> {
        match side {
            Side::Essential => {
                let mut v = lift(LiftRel::SurfaceBetaV, s);
                v.extend(lift(LiftRel::Oplus, s));
                v
            }
            Side::Inessential => lift(LiftRel::DeepBetaV, s),
        }
    }

    fn side(&self, step: &ProbStep) -> Side {
        match step.rel {
            LiftRel::DeepBetaV => Side::Inessential,
            _ => Side::Essential,
        }
    }

    fn source<'a>(&self, step: &'a ProbStep) -> &'a MultiDist {
        &step.source
    }

    fn target<'a>(&self, step: &'a ProbStep) -> &'a MultiDist {
        &step.target
    }

    fn same_step(&self, a: &ProbStep, b: &ProbStep) -> bool {
        a.rel == b.rel && a.moves == b.moves && a.target.same_as(&b.target)
    }

    fn record(&self, step: &ProbStep) -> StepRecord {
        StepRecord {
            rule: step.rel.name().to_string(),
            at: moves_label(&step.moves),
            target: step.target.to_string(),
            essential: Some(self.side(step) == Side::Essential),
        }
    }

    fn show(&self, s: &MultiDist) -> String {
        s.to_string()
    }

    fn size(&self, s: &MultiDist) -> usize {
        s.size()
    }
}
