//! Plain-text prompts for the regression and classification tasks.
//!
//! Layout (sections separated by one blank line, no trailing newline):
//! task description, `Procedure:` with three numbered steps,
//! `Historical Examples:` with one row per training point in the given order,
//! `New Evaluation:` with the query, and a closing `Note:` that asks for a
//! JSON-only reply. Features use ASCII angle brackets and are printed with
//! exactly `feature_precision` decimals; regression targets with
//! `value_precision` decimals.

use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurrogateTask {
    #[serde(rename = "reg")]
    Reg,
    #[serde(rename = "cla")]
    Cla,
}

impl SurrogateTask {
    pub fn as_str(self) -> &'static str {
        match self {
            SurrogateTask::Reg => "reg",
            SurrogateTask::Cla => "cla",
        }
    }
}

impl fmt::Display for SurrogateTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const CLASS_BETTER: &str = "better";
pub const CLASS_WORSE: &str = "worse";

pub fn class_word(label: bool) -> &'static str {
    if label {
        CLASS_BETTER
    } else {
        CLASS_WORSE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Scaled targets in [0,1].
    Values(Vec<f64>),
    /// `true` = better.
    Labels(Vec<bool>),
}

impl Payload {
    pub fn len(&self) -> usize {
        match self {
            Payload::Values(v) => v.len(),
            Payload::Labels(l) => l.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn task(&self) -> SurrogateTask {
        match self {
            Payload::Values(_) => SurrogateTask::Reg,
            Payload::Labels(_) => SurrogateTask::Cla,
        }
    }
}

/// Scaled training rows with their targets.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub x: Vec<Vec<f64>>,
    pub payload: Payload,
    pub feature_precision: u32,
    pub value_precision: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PromptBundle {
    pub task: SurrogateTask,
    pub text: String,
    pub candidate: Vec<f64>,
}

pub const SECTION_PROCEDURE: &str = "Procedure:";
pub const SECTION_HISTORY: &str = "Historical Examples:";
pub const SECTION_QUERY: &str = "New Evaluation:";
pub const SECTION_NOTE: &str = "Note:";

const REG_DESCRIPTION: &str = "Your task is to predict the numerical value of each object based on its attributes. These attributes and their corresponding values are outcomes of a black box function's operation within its decision space. The target value for each object is determined by a specific mapping from these attributes through the black box function. Your objective is to infer the underlying relationships and patterns within the black box function using the provided historical data. This task goes beyond simple statistical analyses, such as calculating means or variances, and requires understanding the complex interactions between the attributes. Please do not attempt to fit the function using code similar to Python; instead, directly learn and infer the numerical values.";

const REG_PROCEDURE: [&str; 3] = [
    "1. Analyze the historical data to uncover how attributes relate to the numerical values.",
    "2. Use these insights to predict the numerical value for new objects based on their attributes.",
    "3. Respond using JSON format, e.g. {'Value': 'approximation result'}",
];

const REG_NOTE: &str = "Respond in Json with the format {'Value':'approximation result'} only.";

const CLA_DESCRIPTION: &str = "You are tasked with evaluating each object based on its numerical attributes to determine its category as 'better' or 'worse'. These attributes derive from a black box function's decision space, with the assessment of the label based on the post-mapping function values. Your role involves discerning the internal variable relationships of the black box function from provided historical data, moving beyond mere statistical analyses like calculating means and variances.";

const CLA_PROCEDURE: [&str; 3] = [
    "1. Identify patterns in how attributes are categorized.",
    "2. Apply these patterns to assess new objects, determining whether its category is better or worse.",
    "3. Respond using JSON format, e.g. {'Class': 'result'}",
];

const CLA_NOTE: &str = "Respond in Json with the format {'Class': 'result'} only.";

pub fn format_features(v: &[f64], decimals: u32) -> String {
    let parts: Vec<String> =
        v.iter().map(|c| format!("{:.*}", decimals as usize, if *c == 0.0 { 0.0 } else { *c })).collect();
    format!("<{}>", parts.join(", "))
}

pub fn render_prompt(data: &LabeledDataset, u: &[f64]) -> Result<PromptBundle> {
    if data.x.is_empty() {
        return Err(Error::InvalidInput("prompt needs at least one historical example".into()));
    }
    if data.payload.len() != data.x.len() {
        return Err(Error::InvalidInput(format!("{} feature rows but {} targets", data.x.len(), data.payload.len())));
    }
    let task = data.payload.task();
    let (description, procedure, note) = match task {
        SurrogateTask::Reg => (REG_DESCRIPTION, REG_PROCEDURE, REG_NOTE),
        SurrogateTask::Cla => (CLA_DESCRIPTION, CLA_PROCEDURE, CLA_NOTE),
    };
    let fp = data.feature_precision;

    let mut text = String::with_capacity(1024 + data.x.len() * (u.len() * 8 + 24));
    text.push_str(description);
    text.push_str("\n\n");
    text.push_str(SECTION_PROCEDURE);
    for step in procedure {
        text.push('\n');
        text.push_str(step);
    }
    text.push_str("\n\n");
    text.push_str(SECTION_HISTORY);
    for (i, row) in data.x.iter().enumerate() {
        text.push('\n');
        let features = format_features(row, fp);
        match &data.payload {
            Payload::Values(v) => {
                let value = if v[i] == 0.0 { 0.0 } else { v[i] };
                let _ = write!(text, "Features: {features} Value: {:.*}", data.value_precision as usize, value);
            }
            Payload::Labels(l) => {
                let _ = write!(text, "Features: {features}, Class: {}", class_word(l[i]));
            }
        }
    }
    text.push_str("\n\n");
    text.push_str(SECTION_QUERY);
    text.push('\n');
    match task {
        SurrogateTask::Reg => {
            let _ = write!(text, "Features: {}", format_features(u, fp));
        }
        SurrogateTask::Cla => {
            let _ = write!(text, "{} better or worse?", format_features(u, fp));
        }
    }
    text.push_str("\n\n");
    text.push_str(SECTION_NOTE);
    text.push('\n');
    text.push_str(note);

    Ok(PromptBundle { task, text, candidate: u.to_vec() })
}

/// Checks that a prompt carries every required section exactly once, with
/// the note last.
pub fn check_structure(prompt: &str) -> Result<()> {
    for section in [SECTION_PROCEDURE, SECTION_HISTORY, SECTION_QUERY, SECTION_NOTE] {
        let hits = prompt.lines().filter(|l| l.trim() == section).count();
        if hits != 1 {
            return Err(Error::PromptStructure(format!("expected one '{section}' block, found {hits}")));
        }
    }
    let note_at = prompt.rfind(SECTION_NOTE).unwrap_or(0);
    let query_at = prompt.rfind(SECTION_QUERY).unwrap_or(0);
    if note_at < query_at {
        return Err(Error::PromptStructure("note block must close the prompt".into()));
    }
    Ok(())
}
