pub mod calculi;
pub mod cli;
pub mod factor;
pub mod gen;
pub mod prob;
pub mod report;
pub mod rewrite;
pub mod term;
