//! OpenAI-compatible `POST {endpoint}/chat/completions` transport.

use serde::{Deserialize, Serialize};
use ureq::Agent;

use super::client::{CallContext, LlmClient, Transport, TransportError};
use super::config::BackendConfig;
use crate::surrogate::SurrogateTask;
use crate::Result;

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    #[serde(default)]
    content: Option<String>,
}

pub struct HttpTransport {
    agent: Agent,
    url: String,
    model: String,
    temperature: f64,
    api_key: Option<String>,
}

impl std::fmt::Debug for HttpTransport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpTransport")
            .field("url", &self.url)
            .field("model", &self.model)
            .field("api_key", &self.api_key.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

impl HttpTransport {
    pub fn new(cfg: &BackendConfig) -> Result<Self> {
        cfg.validate()?;
        let agent: Agent =
            Agent::config_builder().timeout_global(Some(cfg.timeout())).http_status_as_error(false).build().into();
        Ok(Self {
            agent,
            url: cfg.completions_url(),
            model: cfg.model.clone(),
            temperature: cfg.temperature,
            api_key: cfg.api_key(),
        })
    }
}

fn map_error(e: ureq::Error) -> TransportError {
    match e {
        ureq::Error::Timeout(_) => TransportError::Timeout,
        ureq::Error::StatusCode(code) => TransportError::Status(code, String::new()),
        ureq::Error::Io(io) if io.kind() == std::io::ErrorKind::TimedOut => TransportError::Timeout,
        other => TransportError::Connection(other.to_string()),
    }
}

impl Transport for HttpTransport {
    fn send(&self, prompt: &str, _ctx: &CallContext) -> Result<String, TransportError> {
        let body = serde_json::to_string(&ChatRequest {
            model: &self.model,
            messages: [ChatMessage { role: "user", content: prompt }],
            temperature: self.temperature,
        })
        .map_err(|e| TransportError::Protocol(e.to_string()))?;

        let mut req = self.agent.post(&self.url).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", format!("Bearer {key}"));
        }
        let mut resp = req.send(body.as_str()).map_err(map_error)?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(map_error)?;
        if !(200..300).contains(&status) {
            let snippet: String = text.chars().take(200).collect();
            return Err(TransportError::Status(status, snippet));
        }
        let parsed: ChatResponse = serde_json::from_str(&text).map_err(|e| TransportError::Protocol(e.to_string()))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| TransportError::Protocol("response has no choices[0].message.content".into()))
    }
}

/// One-shot completion against `cfg`, with the configured retry policy.
pub fn http_complete(cfg: &BackendConfig, prompt: &str) -> Result<String> {
    let client = LlmClient::new(Box::new(HttpTransport::new(cfg)?), cfg)?;
    let ctx = CallContext { task: SurrogateTask::Reg, dim: 0 };
    client.complete(prompt, &ctx).map(|c| c.text)
}
