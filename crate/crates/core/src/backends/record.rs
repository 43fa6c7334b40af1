use std::io::Write;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::surrogate::SurrogateTask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CallOutcome {
    Ok,
    Malformed,
    TransportError,
}

impl CallOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            CallOutcome::Ok => "ok",
            CallOutcome::Malformed => "malformed",
            CallOutcome::TransportError => "transport-error",
        }
    }
}

/// One outbound request attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallRecord {
    pub task: SurrogateTask,
    pub dim: usize,
    pub chars: usize,
    pub approx_tokens: usize,
    pub latency_s: f64,
    pub outcome: CallOutcome,
}

/// Rough token estimate: one token per four characters, rounded up.
pub fn approx_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

#[derive(Debug, Default)]
pub struct CallLog {
    records: Mutex<Vec<CallRecord>>,
}

impl CallLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&self, record: CallRecord) -> usize {
        let mut guard = self.records.lock().unwrap_or_else(|e| e.into_inner());
        guard.push(record);
        guard.len() - 1
    }

    pub fn mark_malformed(&self, index: usize) {
        let mut guard = self.records.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(r) = guard.get_mut(index) {
            r.outcome = CallOutcome::Malformed;
        }
    }

    pub fn len(&self) -> usize {
        self.records.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<CallRecord> {
        self.records.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Removes and returns every record logged so far.
    pub fn drain(&self) -> Vec<CallRecord> {
        std::mem::take(&mut *self.records.lock().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn write_csv<W: Write>(records: &[CallRecord], mut out: W) -> std::io::Result<()> {
        writeln!(out, "task,dim,chars,approx_tokens,latency_s,outcome")?;
        for r in records {
            writeln!(
                out,
                "{},{},{},{},{:.6},{}",
                r.task,
                r.dim,
                r.chars,
                r.approx_tokens,
                r.latency_s,
                r.outcome.as_str()
            )?;
        }
        Ok(())
    }
}
