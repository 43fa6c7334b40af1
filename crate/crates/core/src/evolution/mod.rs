//! Variation operators: the variable-width histogram model used for LAEA
//! reproduction, a real-coded GA, and CoDE trial generation.

mod code;
mod ga;
mod solution;
mod vwh;

pub use code::{code_generate_trials, repair_reflect, DeStrategy, CODE_MIN_POPULATION, CODE_PARAMETER_POOL};
pub use ga::{ga_step, polynomial_mutation, sbx_crossover, tournament, GaSettings};
pub use solution::{Population, Solution};
pub use vwh::{vwh_fit, vwh_sample, VwhModel, BOUNDARY_PSEUDO_COUNT, DEFAULT_BINS};
