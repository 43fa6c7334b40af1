//! Extraction of the prediction from free-form model output.

use serde_json::{Map, Value};

use super::prompt::{SurrogateTask, CLASS_BETTER, CLASS_WORSE};
use super::Prediction;
use crate::{Error, Result};

/// Balanced `{...}` spans in order of their opening brace. Braces inside
/// quoted strings are ignored.
fn object_spans(text: &str) -> Vec<&str> {
    let bytes = text.as_bytes();
    let mut spans = Vec::new();
    let mut start = 0;
    while let Some(off) = text[start..].find('{') {
        let open = start + off;
        let mut depth = 0usize;
        let mut quote: Option<u8> = None;
        let mut close = None;
        for (i, &b) in bytes.iter().enumerate().skip(open) {
            match quote {
                Some(q) if b == q => quote = None,
                Some(_) => {}
                None => match b {
                    b'"' => quote = Some(b'"'),
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            close = Some(i);
                            break;
                        }
                    }
                    _ => {}
                },
            }
        }
        match close {
            Some(c) => spans.push(&text[open..=c]),
            None => break,
        }
        start = open + 1;
    }
    spans
}

fn parse_object(span: &str) -> Option<Map<String, Value>> {
    let attempt = |s: &str| match serde_json::from_str::<Value>(s) {
        Ok(Value::Object(m)) => Some(m),
        _ => None,
    };
    attempt(span).or_else(|| {
        let normalized = span
            .replace(['\u{2018}', '\u{2019}', '`'], "'")
            .replace(['\u{201c}', '\u{201d}'], "\"")
            .replace('\'', "\"");
        attempt(&normalized)
    })
}

fn lookup<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).or_else(|| obj.iter().find(|(k, _)| k.trim().eq_ignore_ascii_case(key)).map(|(_, v)| v))
}

fn read_value(v: &Value) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().parse::<f64>().ok(),
        _ => None,
    };
    x.filter(|x| x.is_finite()).ok_or_else(|| Error::MalformedResponse(format!("'Value' is not a finite number: {v}")))
}

fn read_class(v: &Value) -> Result<bool> {
    let word = match v {
        Value::String(s) => s.trim().to_ascii_lowercase(),
        other => return Err(Error::MalformedResponse(format!("'Class' is not a word: {other}"))),
    };
    match word.as_str() {
        CLASS_BETTER => Ok(true),
        CLASS_WORSE => Ok(false),
        other => Err(Error::MalformedResponse(format!("unrecognized class '{other}'"))),
    }
}

/// Reads the first JSON object in `text` that carries the task's key.
/// Regression values are returned still scaled.
pub fn parse_llm_response(text: &str, task: SurrogateTask) -> Result<Prediction> {
    let key = match task {
        SurrogateTask::Reg => "Value",
        SurrogateTask::Cla => "Class",
    };
    let mut last_err = None;
    for span in object_spans(text) {
        let Some(obj) = parse_object(span) else { continue };
        let Some(v) = lookup(&obj, key) else {
            last_err = Some(Error::MalformedResponse(format!("object has no '{key}' key")));
            continue;
        };
        return match task {
            SurrogateTask::Reg => read_value(v).map(Prediction::Value),
            SurrogateTask::Cla => read_class(v).map(Prediction::Label),
        };
    }
    Err(last_err.unwrap_or_else(|| Error::MalformedResponse("no JSON object in response".into())))
}
