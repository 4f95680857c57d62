//! Built-in calculi, their expected outcomes, and fixture demos.

mod catalog;
mod demo;
mod runner;

pub use catalog::{catalog, entry, CatalogEntry, Expected, Suite, SuiteKind};
pub use demo::{
    beta_eta_counterexample_demo, demo, head_factorize_demo, nd_duplication_demo,
    oplus_factorize_demo, prob_lift_demo, sigma_overlap_demo, DemoCheck, Transcript, UnknownDemo,
    DEMOS,
};
pub use runner::{
    build_corpus, check_sigma_termination, run_entry, run_suite, Observed, RunConfig, SuiteResult,
};
