//! Surrogate-assisted evolutionary optimization where the surrogate is a
//! language model queried through plain-text prompts, or a deterministic
//! oracle standing in for one.
//!
//! The crate is organised bottom-up:
//!
//! * [`problems`] - benchmark objectives, Latin hypercube and grid sampling.
//! * [`surrogate`] - scaling, labeling, prompt rendering, response parsing and
//!   the [`surrogate::Predictor`] abstraction.
//! * [`backends`] - chat-completion clients, mock transports and oracles.
//! * [`evolution`] - variable-width histogram model, GA and CoDE operators.
//! * [`algorithms`] - LAEA, LAEA-Reg, CoDE pre-selection and GA data collection.
//! * [`stats`] - selection metrics, Wilcoxon rank-sum test and mean ranks.

pub mod algorithms;
pub mod backends;
mod error;
pub mod evolution;
pub mod problems;
pub mod rng;
pub mod stats;
pub mod surrogate;

pub use error::{Error, Result};
