use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use rand::Rng;
use thiserror::Error;

use super::config::BackendConfig;
use super::record::{approx_tokens, CallLog, CallOutcome, CallRecord};
use crate::surrogate::SurrogateTask;
use crate::{Error, Result};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("server returned status {0}: {1}")]
    Status(u16, String),
    #[error("connection failed: {0}")]
    Connection(String),
    #[error("unexpected response: {0}")]
    Protocol(String),
    #[error("{0}")]
    PromptStructure(String),
}

impl TransportError {
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Timeout | TransportError::Connection(_) => true,
            TransportError::Status(code, _) => *code >= 500 || *code == 408 || *code == 429,
            TransportError::Protocol(_) | TransportError::PromptStructure(_) => false,
        }
    }
}

/// A single request/response exchange with a completion service.
pub trait Transport: Send + Sync {
    fn send(&self, prompt: &str, ctx: &CallContext) -> Result<String, TransportError>;
}

/// What the caller is asking about; recorded alongside each attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CallContext {
    pub task: SurrogateTask,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub text: String,
    /// Index of the successful attempt in the client's call log.
    pub record: usize,
}

#[derive(Debug)]
struct Limiter {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Limiter {
    fn new(capacity: usize) -> Self {
        Self { free: Mutex::new(capacity), cv: Condvar::new() }
    }

    fn acquire(&self) {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
    }

    fn release(&self) {
        *self.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.cv.notify_one();
    }
}

/// Retrying, rate-limited, instrumented completion client.
pub struct LlmClient {
    transport: Box<dyn Transport>,
    max_retries: usize,
    backoff_base: Duration,
    parallelism: usize,
    limiter: Limiter,
    in_flight: AtomicUsize,
    peak_in_flight: AtomicUsize,
    log: CallLog,
}

impl LlmClient {
    pub fn new(transport: Box<dyn Transport>, cfg: &BackendConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            transport,
            max_retries: cfg.max_retries,
            backoff_base: Duration::from_secs_f64(cfg.backoff_base_s),
            parallelism: cfg.parallelism,
            limiter: Limiter::new(cfg.parallelism),
            in_flight: AtomicUsize::new(0),
            peak_in_flight: AtomicUsize::new(0),
            log: CallLog::new(),
        })
    }

    pub fn parallelism(&self) -> usize {
        self.parallelism
    }

    pub fn max_retries(&self) -> usize {
        self.max_retries
    }

    pub fn log(&self) -> &CallLog {
        &self.log
    }

    /// Highest number of simultaneously outstanding requests observed.
    pub fn peak_in_flight(&self) -> usize {
        self.peak_in_flight.load(Ordering::SeqCst)
    }

    fn backoff(&self, attempt: usize) -> Duration {
        let base = self.backoff_base.as_secs_f64() * 2f64.powi(attempt as i32);
        let jitter: f64 = rand::rng().random_range(0.5..1.5);
        Duration::from_secs_f64(base * jitter)
    }

    fn attempt(&self, prompt: &str, ctx: &CallContext) -> (Result<String, TransportError>, usize) {
        self.limiter.acquire();
        let now = self.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak_in_flight.fetch_max(now, Ordering::SeqCst);
        let started = Instant::now();
        let result = self.transport.send(prompt, ctx);
        let latency_s = started.elapsed().as_secs_f64();
        self.in_flight.fetch_sub(1, Ordering::SeqCst);
        self.limiter.release();

        let record = self.log.push(CallRecord {
            task: ctx.task,
            dim: ctx.dim,
            chars: prompt.chars().count(),
            approx_tokens: approx_tokens(prompt),
            latency_s,
            outcome: if result.is_ok() { CallOutcome::Ok } else { CallOutcome::TransportError },
        });
        (result, record)
    }

    /// Sends `prompt`, retrying transient failures up to the configured
    /// budget. Every attempt is logged.
    pub fn complete(&self, prompt: &str, ctx: &CallContext) -> Result<Completion> {
        let mut attempt = 0;
        loop {
            match self.attempt(prompt, ctx) {
                (Ok(text), record) => return Ok(Completion { text, record }),
                (Err(TransportError::PromptStructure(msg)), _) => {
                    return Err(Error::PromptStructure(msg));
                }
                (Err(e), _) if e.is_retryable() && attempt < self.max_retries => {
                    log::debug!("completion attempt {attempt} failed: {e}; retrying");
                    std::thread::sleep(self.backoff(attempt));
                    attempt += 1;
                }
                (Err(e), _) => {
                    return Err(Error::BackendUnavailable(format!("{e} (after {} attempts)", attempt + 1)));
                }
            }
        }
    }
}
