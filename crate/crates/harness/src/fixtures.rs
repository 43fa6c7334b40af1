//! Golden prompt fixtures: `<name>.json` describes a request and
//! `<name>.txt` holds the prompt it must render to, byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use laea_core::surrogate::{preprocess_request, render_prompt, LabelRule, SurrogateRequest, SurrogateTask};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptFixture {
    pub task: SurrogateTask,
    pub train_x: Vec<Vec<f64>>,
    pub train_f: Vec<f64>,
    #[serde(default = "default_rule")]
    pub rule: LabelRule,
    pub query: Vec<f64>,
    #[serde(default = "default_feature_precision")]
    pub feature_precision: u32,
    #[serde(default = "default_value_precision")]
    pub value_precision: u32,
}

fn default_rule() -> LabelRule {
    LabelRule::TopK(0.3)
}

fn default_feature_precision() -> u32 {
    laea_core::surrogate::DEFAULT_FEATURE_PRECISION
}

fn default_value_precision() -> u32 {
    laea_core::surrogate::DEFAULT_VALUE_PRECISION
}

impl PromptFixture {
    pub fn render(&self) -> Result<String> {
        let queries = [self.query.clone()];
        let req = SurrogateRequest {
            task: self.task,
            train_x: &self.train_x,
            train_f: &self.train_f,
            rule: self.rule,
            queries: &queries,
        };
        let (_, data, scaled) = preprocess_request(&req, self.feature_precision, self.value_precision)?;
        Ok(render_prompt(&data, &scaled[0])?.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureStatus {
    Match,
    Mismatch,
    Missing,
    Blessed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureReport {
    pub name: String,
    pub status: FixtureStatus,
    /// 1-based line of the first difference, for mismatches.
    pub first_difference: Option<usize>,
}

fn first_difference(a: &str, b: &str) -> usize {
    let mut la = a.split('\n');
    let mut lb = b.split('\n');
    let mut line = 1;
    loop {
        match (la.next(), lb.next()) {
            (Some(x), Some(y)) if x == y => line += 1,
            _ => return line,
        }
    }
}

/// Renders every fixture in `dir` and compares it with its golden file. With
/// `bless`, golden files are (re)written instead.
pub fn validate_dir(dir: &Path, bless: bool) -> Result<Vec<FixtureReport>> {
    let mut inputs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    inputs.sort();
    if inputs.is_empty() {
        bail!("no fixtures found in {}", dir.display());
    }
    let mut reports = Vec::with_capacity(inputs.len());
    for input in inputs {
        let name = input.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
        let fixture: PromptFixture =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", input.display()))?;
        let rendered = fixture.render().with_context(|| format!("rendering {name}"))?;
        let golden = input.with_extension("txt");
        let (status, first) = if bless {
            fs::write(&golden, &rendered).with_context(|| format!("writing {}", golden.display()))?;
            (FixtureStatus::Blessed, None)
        } else {
            match fs::read(&golden) {
                Err(_) => (FixtureStatus::Missing, None),
                Ok(bytes) if bytes == rendered.as_bytes() => (FixtureStatus::Match, None),
                Ok(bytes) => {
                    let want = String::from_utf8_lossy(&bytes);
                    (FixtureStatus::Mismatch, Some(first_difference(&want, &rendered)))
                }
            }
        };
        reports.push(FixtureReport { name, status, first_difference: first });
    }
    Ok(reports)
}
