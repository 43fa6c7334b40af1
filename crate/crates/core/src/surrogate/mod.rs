//! The surrogate protocol: preprocessing, prompting, inference and
//! post-processing, behind the [`Predictor`] abstraction.

mod labels;
mod prompt;
mod response;
mod scaling;

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

pub use labels::{ascending_order, assign_labels_median, assign_labels_topk, median, topk_count, LabelRule};
pub use prompt::{
    check_structure, class_word, format_features, render_prompt, LabeledDataset, Payload, PromptBundle, SurrogateTask,
    CLASS_BETTER, CLASS_WORSE, SECTION_HISTORY, SECTION_NOTE, SECTION_PROCEDURE, SECTION_QUERY,
};
pub use response::parse_llm_response;
pub use scaling::{
    apply_scaling, fit_scaling, inverse_scale_value, round_decimals, Range, ScalingTransform,
    DEFAULT_FEATURE_PRECISION, DEFAULT_VALUE_PRECISION,
};

use crate::backends::{CallContext, LlmClient};
use crate::{Error, Result};

/// A prediction for one query: an objective value in original units, or a
/// label (`true` = better).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Prediction {
    Value(f64),
    Label(bool),
}

impl Prediction {
    pub fn value(&self) -> Option<f64> {
        match self {
            Prediction::Value(v) => Some(*v),
            Prediction::Label(_) => None,
        }
    }

    pub fn label(&self) -> Option<bool> {
        match self {
            Prediction::Label(l) => Some(*l),
            Prediction::Value(_) => None,
        }
    }
}

/// Training context and queries for one batched prediction. Regression uses
/// `train_f` as targets; classification derives labels from it with `rule`.
#[derive(Debug, Clone, Copy)]
pub struct SurrogateRequest<'a> {
    pub task: SurrogateTask,
    pub train_x: &'a [Vec<f64>],
    pub train_f: &'a [f64],
    pub rule: LabelRule,
    pub queries: &'a [Vec<f64>],
}

impl SurrogateRequest<'_> {
    pub fn validate(&self) -> Result<()> {
        if self.train_x.is_empty() {
            return Err(Error::InvalidInput("surrogate needs at least one training point".into()));
        }
        if self.train_x.len() != self.train_f.len() {
            return Err(Error::InvalidInput(format!(
                "{} training points but {} targets",
                self.train_x.len(),
                self.train_f.len()
            )));
        }
        if self.queries.is_empty() {
            return Err(Error::InvalidInput("no query points".into()));
        }
        let dim = self.train_x[0].len();
        if self.train_x.iter().chain(self.queries).any(|p| p.len() != dim) {
            return Err(Error::InvalidInput("points differ in dimension".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.train_x.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutcome {
    /// One entry per query, in query order.
    pub predictions: Vec<Prediction>,
    /// Queries that fell back to the default answer.
    pub failures: usize,
}

impl BatchOutcome {
    pub fn values(&self) -> Vec<f64> {
        self.predictions.iter().map(|p| p.value().unwrap_or(f64::NAN)).collect()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.predictions.iter().map(|p| p.label().unwrap_or(false)).collect()
    }
}

pub trait Predictor: Send + Sync {
    fn predict(&self, request: &SurrogateRequest<'_>) -> Result<BatchOutcome>;

    /// Short identifier used in logs and manifests.
    fn describe(&self) -> String;
}

/// Validates the request and runs the predictor on it.
pub fn predict_batch(predictor: &dyn Predictor, request: &SurrogateRequest<'_>) -> Result<BatchOutcome> {
    request.validate()?;
    let out = predictor.predict(request)?;
    if out.predictions.len() != request.queries.len() {
        return Err(Error::InvalidState(format!(
            "predictor returned {} predictions for {} queries",
            out.predictions.len(),
            request.queries.len()
        )));
    }
    Ok(out)
}

/// A request after scaling: the transform, the training context as it
/// appears in prompts, and the scaled queries.
pub type Prepared = (ScalingTransform, LabeledDataset, Vec<Vec<f64>>);

/// Fits the scaling on the training rows, scales rows and queries, and
/// attaches targets (scaled values or rule-derived labels).
pub fn preprocess_request(
    request: &SurrogateRequest<'_>,
    feature_precision: u32,
    value_precision: u32,
) -> Result<Prepared> {
    request.validate()?;
    let targets = (request.task == SurrogateTask::Reg).then_some(request.train_f);
    let t = fit_scaling(request.train_x, targets, feature_precision)?.with_value_precision(value_precision);
    let scale_all = |rows: &[Vec<f64>]| rows.iter().map(|r| apply_scaling(&t, r)).collect::<Result<Vec<_>>>();
    let x = scale_all(request.train_x)?;
    let queries = scale_all(request.queries)?;
    let payload = match request.task {
        SurrogateTask::Reg => {
            Payload::Values(request.train_f.iter().map(|&y| t.scale_value(y)).collect::<Result<Vec<_>>>()?)
        }
        SurrogateTask::Cla => Payload::Labels(request.rule.training_labels(request.train_f)),
    };
    let data = LabeledDataset { x, payload, feature_precision, value_precision };
    Ok((t, data, queries))
}

/// Language-model surrogate: scale, render one prompt per query, complete,
/// parse, and inverse-scale.
pub struct PromptSurrogate {
    client: Arc<LlmClient>,
    feature_precision: u32,
    value_precision: u32,
    name: String,
}

impl PromptSurrogate {
    pub fn new(client: Arc<LlmClient>) -> Self {
        Self {
            client,
            feature_precision: DEFAULT_FEATURE_PRECISION,
            value_precision: DEFAULT_VALUE_PRECISION,
            name: "prompt".into(),
        }
    }

    pub fn with_precision(mut self, feature_precision: u32, value_precision: u32) -> Self {
        self.feature_precision = feature_precision.max(1);
        self.value_precision = value_precision.max(1);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn client(&self) -> &LlmClient {
        &self.client
    }

    /// Scales the request and builds the shared training context.
    pub fn preprocess(&self, request: &SurrogateRequest<'_>) -> Result<Prepared> {
        preprocess_request(request, self.feature_precision, self.value_precision)
    }

    /// Returns `None` when every attempt produced an unusable reply.
    fn predict_one(
        &self,
        t: &ScalingTransform,
        data: &LabeledDataset,
        u: &[f64],
        ctx: &CallContext,
    ) -> Result<Option<Prediction>> {
        let bundle = render_prompt(data, u)?;
        for _ in 0..=self.client.max_retries() {
            let completion = self.client.complete(&bundle.text, ctx)?;
            match parse_llm_response(&completion.text, bundle.task) {
                Ok(Prediction::Value(s)) => return Ok(Some(Prediction::Value(inverse_scale_value(t, s)?))),
                Ok(label) => return Ok(Some(label)),
                Err(e) => {
                    log::debug!("unusable reply ({e}): {:?}", completion.text);
                    self.client.log().mark_malformed(completion.record);
                }
            }
        }
        Ok(None)
    }
}

impl Predictor for PromptSurrogate {
    fn predict(&self, request: &SurrogateRequest<'_>) -> Result<BatchOutcome> {
        let (t, data, queries) = self.preprocess(request)?;
        let fallback = match request.task {
            SurrogateTask::Reg => Prediction::Value(median(request.train_f)),
            SurrogateTask::Cla => Prediction::Label(false),
        };
        let ctx = CallContext { task: request.task, dim: request.dim() };

        let next = AtomicUsize::new(0);
        let abort = AtomicBool::new(false);
        let slots: Mutex<Vec<Option<Prediction>>> = Mutex::new(vec![None; queries.len()]);
        let failures = AtomicUsize::new(0);
        let first_error: Mutex<Option<Error>> = Mutex::new(None);
        let workers = self.client.parallelism().min(queries.len()).max(1);

        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    if abort.load(Ordering::SeqCst) {
                        break;
                    }
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= queries.len() {
                        break;
                    }
                    match self.predict_one(&t, &data, &queries[i], &ctx) {
                        Ok(Some(p)) => slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(p),
                        Ok(None) => {
                            failures.fetch_add(1, Ordering::SeqCst);
                            slots.lock().unwrap_or_else(|e| e.into_inner())[i] = Some(fallback);
                        }
                        Err(e) => {
                            abort.store(true, Ordering::SeqCst);
                            first_error.lock().unwrap_or_else(|e| e.into_inner()).get_or_insert(e);
                            break;
                        }
                    }
                });
            }
        });

        if let Some(e) = first_error.into_inner().unwrap_or_else(|e| e.into_inner()) {
            return Err(e);
        }
        let predictions = slots
            .into_inner()
            .unwrap_or_else(|e| e.into_inner())
            .into_iter()
            .map(|p| p.expect("every query is answered"))
            .collect();
        Ok(BatchOutcome { predictions, failures: failures.into_inner() })
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}
