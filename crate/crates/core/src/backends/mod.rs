//! Completion backends and oracle predictors.
//!
//! A [`Transport`] performs one request/response exchange. [`LlmClient`] wraps
//! a transport with retries, exponential backoff, a concurrency limit and an
//! append-only [`CallLog`]. Oracles skip prompts entirely and answer from the
//! true objective.

mod client;
mod config;
mod echo;
mod http;
mod oracle;
mod record;

pub use client::{CallContext, Completion, LlmClient, Transport, TransportError};
pub use config::BackendConfig;
pub use echo::{echo_complete, EchoTransport, RecallTransport, ScriptedTransport};
pub use http::{http_complete, HttpTransport};
pub use oracle::{oracle_predict, OracleMode, OraclePredictor, OracleSpec};
pub use record::{approx_tokens, CallLog, CallOutcome, CallRecord};
