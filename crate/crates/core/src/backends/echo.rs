//! Deterministic stand-ins for a language model.

use std::sync::Mutex;
use std::time::Duration;

use super::client::{CallContext, Transport, TransportError};
use crate::surrogate::{check_structure, SurrogateTask, SECTION_HISTORY, SECTION_QUERY};
use crate::Result;

/// Validates the prompt layout, then returns `canned` unchanged.
pub fn echo_complete(canned: &str, prompt: &str) -> Result<String> {
    check_structure(prompt)?;
    Ok(canned.to_string())
}

/// Replies with a fixed string per task after checking the prompt layout.
#[derive(Debug, Clone)]
pub struct EchoTransport {
    pub reg_reply: String,
    pub cla_reply: String,
    pub delay: Option<Duration>,
}

impl EchoTransport {
    pub fn new(reg_reply: impl Into<String>, cla_reply: impl Into<String>) -> Self {
        Self { reg_reply: reg_reply.into(), cla_reply: cla_reply.into(), delay: None }
    }

    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = Some(delay);
        self
    }
}

impl Transport for EchoTransport {
    fn send(&self, prompt: &str, ctx: &CallContext) -> Result<String, TransportError> {
        if let Some(d) = self.delay {
            std::thread::sleep(d);
        }
        let canned = match ctx.task {
            SurrogateTask::Reg => &self.reg_reply,
            SurrogateTask::Cla => &self.cla_reply,
        };
        echo_complete(canned, prompt).map_err(|e| TransportError::PromptStructure(e.to_string()))
    }
}

/// Plays back a fixed script of outcomes; the last entry repeats forever.
#[derive(Debug)]
pub struct ScriptedTransport {
    script: Vec<Result<String, TransportError>>,
    cursor: Mutex<usize>,
}

impl ScriptedTransport {
    pub fn new(script: Vec<Result<String, TransportError>>) -> Self {
        assert!(!script.is_empty(), "script needs at least one entry");
        Self { script, cursor: Mutex::new(0) }
    }
}

impl Transport for ScriptedTransport {
    fn send(&self, _prompt: &str, _ctx: &CallContext) -> Result<String, TransportError> {
        let mut cursor = self.cursor.lock().unwrap_or_else(|e| e.into_inner());
        let i = (*cursor).min(self.script.len() - 1);
        *cursor += 1;
        self.script[i].clone()
    }
}

/// Answers with the target of the historical row whose features equal the
/// query's, or `{}` when no row matches.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecallTransport;

fn recall(prompt: &str) -> Option<String> {
    let mut lines = prompt.lines();
    lines.by_ref().find(|l| l.trim() == SECTION_QUERY)?;
    let query = lines.next()?;
    let features = &query[query.find('<')?..=query.find('>')?];
    let row = prompt
        .lines()
        .skip_while(|l| l.trim() != SECTION_HISTORY)
        .take_while(|l| l.trim() != SECTION_QUERY)
        .find(|l| l.strip_prefix("Features: ").is_some_and(|r| r.starts_with(features)))?;
    let rest = &row[row.find('>')? + 1..];
    if let Some(v) = rest.trim().strip_prefix("Value: ") {
        Some(format!("{{\"Value\": \"{}\"}}", v.trim()))
    } else {
        let class = rest.trim().strip_prefix(", Class: ").or_else(|| rest.trim().strip_prefix("Class: "))?;
        Some(format!("{{\"Class\": \"{}\"}}", class.trim()))
    }
}

impl Transport for RecallTransport {
    fn send(&self, prompt: &str, _ctx: &CallContext) -> Result<String, TransportError> {
        check_structure(prompt).map_err(|e| TransportError::PromptStructure(e.to_string()))?;
        Ok(recall(prompt).unwrap_or_else(|| "{}".into()))
    }
}
