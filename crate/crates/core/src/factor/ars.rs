use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::StepRecord;
use crate::rewrite::{record_of, steps_of, Calculus, Step, StepFilter};
use crate::term::{AlphaKey, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Essential,
    Inessential,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Essential, Side::Inessential];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Essential => "e",
            Side::Inessential => "i",
        })
    }
}

/// An abstract rewriting system split into essential and inessential steps.
pub trait Ars: Sync {
    type State: Clone + Send + Sync;
    type Key: Eq + Hash + Ord + Clone + Send + Sync;
    type Step: Clone + Send + Sync;

    fn key(&self, s: &Self::State) -> Self::Key;
    /// Steps of one side, in a fixed deterministic order.
    fn steps(&self, s: &Self::State, side: Side) -> Vec<Self::Step>;
    fn side(&self, step: &Self::Step) -> Side;
    fn source<'a>(&self, step: &'a Self::Step) -> &'a Self::State;
    fn target<'a>(&self, step: &'a Self::Step) -> &'a Self::State;
    fn same_step(&self, a: &Self::Step, b: &Self::Step) -> bool;
    fn record(&self, step: &Self::Step) -> StepRecord;
    fn show(&self, s: &Self::State) -> String;
    fn size(&self, s: &Self::State) -> usize;

    /// Steps of both sides, essential first.
    fn all_steps(&self, s: &Self::State) -> Vec<Self::Step> {
        let mut v = self.steps(s, Side::Essential);
        v.extend(self.steps(s, Side::Inessential));
        v
    }
}

/// A calculus viewed through its essential class.
#[derive(Clone, Debug)]
pub struct TermView {
    pub calculus: Calculus,
}

impl TermView {
    pub fn new(calculus: Calculus) -> TermView {
        TermView { calculus }
    }
}

impl Ars for TermView {
    type State = Term;
    type Key = AlphaKey;
    type Step = Step;

    fn key(&self, s: &Term) -> AlphaKey {
        s.alpha_key()
    }

    fn steps(&self, s: &Term, side: Side) -> Vec<Step> {
        let e = self.calculus.essential;
        let filter = match side {
            Side::Essential => StepFilter::In(e),
            Side::Inessential => StepFilter::NotIn(e),
        };
        steps_of(&self.calculus.rules, s, filter)
    }

    fn side(&self, step: &Step) -> Side {
        if step.classes.contains(self.calculus.essential) {
            Side::Essential
        } else {
            Side::Inessential
        }
    }

    fn source<'a>(&self, step: &'a Step) -> &'a Term {
        &step.source
    }

    fn target<'a>(&self, step: &'a Step) -> &'a Term {
        &step.target
    }

    fn same_step(&self, a: &Step, b: &Step) -> bool {
        a.same_as(b)
    }

    fn record(&self, step: &Step) -> StepRecord {
        record_of(step, Some(self.calculus.essential))
    }

    fn show(&self, s: &Term) -> String {
        s.to_string()
    }

    fn size(&self, s: &Term) -> usize {
        s.size()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {index} does not start at the current state {state}")]
    WrongSource { index: usize, state: String },
    #[error("step {index} is not an enumerated {side} step of {state}")]
    NotAStep {
        index: usize,
        side: Side,
        state: String,
    },
    #[error("chain ends at {got}, expected {expected}")]
    WrongEnd { got: String, expected: String },
}

/// Re-derives every step of `chain` from `start` through the step
/// enumerator and returns the final state.
pub fn replay<A: Ars>(
    ars: &A,
    start: &A::State,
    chain: &[A::Step],
) -> Result<A::State, ReplayError> {
    let mut cur = start.clone();
    for (index, step) in chain.iter().enumerate() {
        if ars.key(ars.source(step)) != ars.key(&cur) {
            return Err(ReplayError::WrongSource {
                index,
                state: ars.show(&cur),
            });
        }
        let side = ars.side(step);
        let Some(found) = ars
            .steps(&cur, side)
            .into_iter()
            .find(|s| ars.same_step(s, step))
        else {
            return Err(ReplayError::NotAStep {
                index,
                side,
                state: ars.show(&cur),
            });
        };
        cur = ars.target(&found).clone();
    }
    Ok(cur)
}

/// Replays `chain` and checks it ends at `end`.
pub fn replay_to<A: Ars>(
    ars: &A,
    start: &A::State,
    chain: &[A::Step],
    end: &A::State,
) -> Result<(), ReplayError> {
    let got = replay(ars, start, chain)?;
    if ars.key(&got) != ars.key(end) {
        return Err(ReplayError::WrongEnd {
            got: ars.show(&got),
            expected: ars.show(end),
        });
    }
    Ok(())
}

/// Essential steps all precede inessential ones.
pub fn is_factorized<A: Ars>(ars: &A, chain: &[A::Step]) -> bool {
    chain
        .windows(2)
        .all(|w| !(ars.side(&w[0]) == Side::Inessential && ars.side(&w[1]) == Side::Essential))
}
