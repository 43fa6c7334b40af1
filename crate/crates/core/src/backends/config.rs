use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

fn default_endpoint() -> String {
    "http://localhost:11434/v1".into()
}

fn default_timeout() -> f64 {
    120.0
}

fn default_retries() -> usize {
    3
}

fn default_parallelism() -> usize {
    1
}

fn default_backoff() -> f64 {
    0.5
}

/// Connection settings for an OpenAI-compatible chat-completion server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    #[serde(default = "default_endpoint")]
    pub endpoint: String,
    pub model: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// Name of the environment variable holding the API key, if any.
    #[serde(default)]
    pub api_key_env: Option<String>,
    /// First backoff delay; attempt `k` waits `backoff_base_s * 2^k`, jittered.
    #[serde(default = "default_backoff")]
    pub backoff_base_s: f64,
}

impl BackendConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            temperature: 0.0,
            timeout_s: default_timeout(),
            max_retries: default_retries(),
            parallelism: default_parallelism(),
            api_key_env: None,
            backoff_base_s: default_backoff(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.timeout_s > 0.0) {
            return Err(Error::InvalidInput("timeout must be positive".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::InvalidInput("parallelism must be at least 1".into()));
        }
        if self.backoff_base_s < 0.0 {
            return Err(Error::InvalidInput("backoff must be non-negative".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_s)
    }

    pub fn completions_url(&self) -> String {
        format!("{}/chat/completions", self.endpoint.trim_end_matches('/'))
    }

    pub(crate) fn api_key(&self) -> Option<String> {
        self.api_key_env.as_deref().and_then(|name| std::env::var(name).ok()).filter(|k| !k.is_empty())
    }
}
