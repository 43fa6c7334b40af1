use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::evolution::Solution;
use crate::problems::DecisionVector;
use crate::{Error, Result};

/// Append-only record of every truly evaluated solution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    entries: Vec<Solution>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, s: Solution) -> Result<()> {
        if !s.evaluated {
            return Err(Error::InvalidState("only evaluated solutions enter the archive".into()));
        }
        self.entries.push(s);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Solution] {
        &self.entries
    }

    pub fn best(&self) -> Option<&Solution> {
        self.entries.iter().reduce(|a, b| if b.f() < a.f() { b } else { a })
    }

    pub fn into_entries(self) -> Vec<Solution> {
        self.entries
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// 0 is the initial design.
    pub gen: usize,
    pub fes: usize,
    pub best_f: f64,
    /// Size of the unevaluated set carried into the next generation.
    pub unevaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub best_x: DecisionVector,
    pub best_f: f64,
    pub trace: Vec<TracePoint>,
    pub archive: Vec<Solution>,
    /// Queries answered by fallback instead of the predictor.
    pub failures: usize,
    pub predict_calls: usize,
    pub seed: u64,
    /// True evaluations consumed, initial design included.
    pub fes: usize,
    pub budget: usize,
    pub init_evaluations: usize,
    /// False when the run stopped early because the backend failed.
    pub complete: bool,
    pub abort_reason: Option<String>,
    pub config: serde_json::Value,
}

impl RunResult {
    pub(crate) fn from_archive(archive: Archive, seed: u64, budget: usize, config: serde_json::Value) -> Result<Self> {
        let best = archive.best().cloned().ok_or_else(|| Error::InvalidState("empty archive".into()))?;
        Ok(Self {
            best_f: best.f(),
            best_x: best.x,
            trace: Vec::new(),
            fes: archive.len(),
            archive: archive.into_entries(),
            failures: 0,
            predict_calls: 0,
            seed,
            budget,
            init_evaluations: 0,
            complete: true,
            abort_reason: None,
            config,
        })
    }

    /// Flags the run incomplete on a backend outage; other errors propagate.
    pub(crate) fn stop_on(&mut self, e: Error) -> Result<()> {
        match e {
            Error::BackendUnavailable(msg) => {
                log::warn!("run aborted: {msg}");
                self.complete = false;
                self.abort_reason = Some(msg);
                Ok(())
            }
            other => Err(other),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidState(e.to_string()))
    }
}

/// Writes `gen,fes,best_f` rows.
pub fn write_trace_csv<W: Write>(trace: &[TracePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "gen,fes,best_f")?;
    for t in trace {
        writeln!(out, "{},{},{}", t.gen, t.fes, t.best_f)?;
    }
    Ok(())
}
