use std::sync::Arc;
use std::time::Duration;

use anyhow::Result;
use laea_core::backends::{
    BackendConfig, EchoTransport, HttpTransport, LlmClient, OraclePredictor, OracleSpec, RecallTransport, Transport,
};
use laea_core::problems::BenchmarkProblem;
use laea_core::surrogate::{Predictor, PromptSurrogate};

use crate::config::{default_cla_reply, default_reg_reply, PredictorSpec};

/// `NO_NETWORK=1` swaps every networked predictor for a local echo.
pub fn no_network() -> bool {
    std::env::var("NO_NETWORK").is_ok_and(|v| v == "1")
}

pub struct BuiltPredictor {
    pub predictor: Box<dyn Predictor>,
    /// Present for prompt-based predictors.
    pub client: Option<Arc<LlmClient>>,
}

fn local_config(parallelism: usize) -> BackendConfig {
    BackendConfig { parallelism: parallelism.max(1), backoff_base_s: 0.0, ..BackendConfig::new("local://", "local") }
}

fn prompted(
    transport: Box<dyn Transport>,
    cfg: &BackendConfig,
    precision: (u32, u32),
    name: &str,
) -> Result<BuiltPredictor> {
    let client = Arc::new(LlmClient::new(transport, cfg)?);
    let surrogate = PromptSurrogate::new(Arc::clone(&client)).with_precision(precision.0, precision.1).with_name(name);
    Ok(BuiltPredictor { predictor: Box::new(surrogate), client: Some(client) })
}

/// Builds the predictor for one cell. Oracle seeds are offset by the run
/// seed so replications draw independent noise. `precision` overrides the
/// spec's feature/value decimals; `parallelism` the concurrency limit.
pub fn build(
    spec: &PredictorSpec,
    problem: &BenchmarkProblem,
    run_seed: u64,
    precision: Option<(u32, u32)>,
    parallelism: Option<usize>,
) -> Result<BuiltPredictor> {
    let default_precision =
        (laea_core::surrogate::DEFAULT_FEATURE_PRECISION, laea_core::surrogate::DEFAULT_VALUE_PRECISION);
    match spec {
        PredictorSpec::Oracle(o) => {
            let seeded = OracleSpec { seed: o.seed.wrapping_add(run_seed), ..*o };
            Ok(BuiltPredictor { predictor: Box::new(OraclePredictor::new(seeded, problem.clone())?), client: None })
        }
        PredictorSpec::Llm { backend, feature_precision, value_precision } => {
            let p = precision.unwrap_or((*feature_precision, *value_precision));
            let mut cfg = backend.clone();
            if let Some(k) = parallelism {
                cfg.parallelism = k;
            }
            if no_network() {
                log::info!("NO_NETWORK=1: replacing {} with a local echo", cfg.model);
                let transport = EchoTransport::new(default_reg_reply(), default_cla_reply());
                return prompted(Box::new(transport), &local_config(cfg.parallelism), p, "echo");
            }
            let name = format!("llm:{}", cfg.model);
            prompted(Box::new(HttpTransport::new(&cfg)?), &cfg, p, &name)
        }
        PredictorSpec::Echo { reg_reply, cla_reply, delay_ms, parallelism: k } => {
            let mut t = EchoTransport::new(reg_reply.clone(), cla_reply.clone());
            if *delay_ms > 0 {
                t = t.with_delay(Duration::from_millis(*delay_ms));
            }
            let cfg = local_config(parallelism.unwrap_or(*k));
            prompted(Box::new(t), &cfg, precision.unwrap_or(default_precision), "echo")
        }
        PredictorSpec::Recall { parallelism: k } => {
            let cfg = local_config(parallelism.unwrap_or(*k));
            prompted(Box::new(RecallTransport), &cfg, precision.unwrap_or(default_precision), "recall")
        }
    }
}
