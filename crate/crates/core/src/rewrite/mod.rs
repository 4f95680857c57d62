//! Root rules, their contextual closure, and rule-level properties.

mod calculus;
mod props;
mod rule;
mod step;

pub use calculus::{Calculus, CalculusFileError, GrammarError};
pub(crate) use props::record_of;
pub use props::{check_shape_preservation, check_substitutive, shape_violation};
pub use rule::{root_apply, Rule, UnknownRule};
pub use step::{enumerate_steps, essential_steps, inessential_steps, steps_of, Step, StepFilter};
