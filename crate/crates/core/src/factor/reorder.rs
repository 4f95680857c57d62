use thiserror::Error;

use super::oracle::factorized_paths;
use super::{is_factorized, replay, Ars, ReplayError, Side};

#[derive(Debug, Clone, PartialEq)]
pub enum Reordered<S> {
    Factorized(Vec<S>),
    /// Budget ran out; `partial` is the last valid sequence reached.
    Unknown {
        partial: Vec<S>,
        explored: usize,
    },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReorderError {
    #[error("malformed chain: {0}")]
    Malformed(#[from] ReplayError),
}

/// Rewrites `seq` into e*·i* shape by repeatedly replacing the first
/// inessential-then-essential adjacency with a shortest e*·i* path between
/// its endpoints. Endpoints are preserved and every step stays valid.
pub fn reorder_sequence<A: Ars>(
    ars: &A,
    start: &A::State,
    seq: &[A::Step],
    budget: usize,
) -> Result<Reordered<A::Step>, ReorderError> {
    replay(ars, start, seq)?;
    let mut chain = seq.to_vec();
    let mut spent = 0usize;
    loop {
        let Some(j) = chain.windows(2).position(|w| {
            ars.side(&w[0]) == Side::Inessential && ars.side(&w[1]) == Side::Essential
        }) else {
            debug_assert!(is_factorized(ars, &chain));
            return Ok(Reordered::Factorized(chain));
        };
        let from = ars.source(&chain[j]).clone();
        let to = ars.key(ars.target(&chain[j + 1]));
        let search = factorized_paths(ars, &from, &[to], budget.saturating_sub(spent));
        spent += search.explored;
        match search.found.into_iter().next().flatten() {
            Some(local) if spent <= budget => {
                chain.splice(j..j + 2, local);
            }
            _ => {
                return Ok(Reordered::Unknown {
                    partial: chain,
                    explored: spent,
                })
            }
        }
    }
}
