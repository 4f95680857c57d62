//! Call-by-value probabilistic calculus over multi-distributions.

mod check;
mod dist;
mod step;

pub use check::{
    check_embedding, check_mass_conservation, check_prob_factorization, check_prob_surface_swap,
};
pub use dist::{mdist_scale, mdist_sum, DistError, DistKey, Entry, MultiDist, Prob};
pub use step::{lift, term_prob_steps, LiftRel, ProbKind, ProbStep, ProbView, TermProbStep};

use crate::factor::{factorization_oracle, OracleRun};

/// The surface factorization oracle from one multi-distribution.
pub fn prob_factorization_oracle(
    m: &MultiDist,
    seq_depth: usize,
    budget: usize,
) -> OracleRun<ProbView> {
    factorization_oracle(&ProbView, m, seq_depth, budget)
}
