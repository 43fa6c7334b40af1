//! Experiment configuration: one JSON document per experiment.

use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use laea_core::algorithms::{LaeaConfig, PreselectConfig, PreselectStrategy, Variant};
use laea_core::backends::{BackendConfig, OracleSpec};
use laea_core::evolution::GaSettings;
use laea_core::problems::ProblemName;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Case2d,
    SelectAcc,
    Compare,
    Preselect,
    Timing,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Case2d => "case2d",
            ExperimentKind::SelectAcc => "select-acc",
            ExperimentKind::Compare => "compare",
            ExperimentKind::Preselect => "preselect",
            ExperimentKind::Timing => "timing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PredictorSpec {
    /// Answers from the true objective.
    Oracle(OracleSpec),
    /// Prompts an OpenAI-compatible chat-completion server.
    Llm {
        backend: BackendConfig,
        #[serde(default = "default_feature_precision")]
        feature_precision: u32,
        #[serde(default = "default_value_precision")]
        value_precision: u32,
    },
    /// Prompts a local stand-in that returns fixed replies.
    Echo {
        #[serde(default = "default_reg_reply")]
        reg_reply: String,
        #[serde(default = "default_cla_reply")]
        cla_reply: String,
        #[serde(default)]
        delay_ms: u64,
        #[serde(default = "default_echo_parallelism")]
        parallelism: usize,
    },
    /// Prompts a local stand-in that answers with the matching training row.
    Recall {
        #[serde(default = "default_echo_parallelism")]
        parallelism: usize,
    },
}

fn default_feature_precision() -> u32 {
    laea_core::surrogate::DEFAULT_FEATURE_PRECISION
}

fn default_value_precision() -> u32 {
    laea_core::surrogate::DEFAULT_VALUE_PRECISION
}

pub(crate) fn default_reg_reply() -> String {
    "{'Value': '0.5'}".into()
}

pub(crate) fn default_cla_reply() -> String {
    "{'Class': 'worse'}".into()
}

fn default_echo_parallelism() -> usize {
    1
}

impl PredictorSpec {
    pub fn is_prompt_based(&self) -> bool {
        !matches!(self, PredictorSpec::Oracle(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSpec {
    pub name: String,
    pub predictor: PredictorSpec,
    /// LAEA variant for `compare`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    /// Trial choice for `preselect`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<PreselectStrategy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    /// Run `i` uses `master + i`.
    Fanout {
        master: u64,
        runs: usize,
    },
}

impl SeedSpec {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Fanout { master, runs } => (0..*runs as u64).map(|i| master.wrapping_add(i)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegLabeling {
    /// Predicted value below the training median.
    #[default]
    Threshold,
    /// Best half of the predicted grid values.
    RankHalf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Case2dSettings {
    pub train_size: usize,
    pub grid_points: usize,
    pub reg_labeling: RegLabeling,
}

impl Default for Case2dSettings {
    fn default() -> Self {
        Self { train_size: 50, grid_points: 20, reg_labeling: RegLabeling::Threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SelectAccSettings {
    pub ga: GaSettings,
    pub generations: Vec<usize>,
    /// Read `{problem}-{dim}.csv` datasets from here instead of generating them.
    pub dataset_dir: Option<PathBuf>,
}

impl Default for SelectAccSettings {
    fn default() -> Self {
        Self { ga: GaSettings::default(), generations: vec![2, 22, 42], dataset_dir: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimingSettings {
    pub dims: Vec<usize>,
    pub precisions: Vec<u32>,
    pub train_size: usize,
    pub test_size: usize,
    pub parallelism: usize,
}

impl Default for TimingSettings {
    fn default() -> Self {
        Self { dims: vec![5, 10], precisions: vec![3, 5], train_size: 50, test_size: 50, parallelism: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub experiment: ExperimentKind,
    pub problems: Vec<ProblemName>,
    #[serde(default)]
    pub dims: Vec<usize>,
    pub arms: Vec<ArmSpec>,
    #[serde(default)]
    pub reference_arm: Option<String>,
    pub seeds: SeedSpec,
    /// True evaluations per run for `compare` and `preselect`.
    #[serde(default)]
    pub budget: Option<usize>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub laea: LaeaConfig,
    #[serde(default)]
    pub preselect: PreselectConfig,
    #[serde(default)]
    pub case2d: Case2dSettings,
    #[serde(default)]
    pub select_acc: SelectAccSettings,
    #[serde(default)]
    pub timing: TimingSettings,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("parsing experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn seed_list(&self) -> Vec<u64> {
        self.seeds.expand()
    }

    pub fn arm(&self, name: &str) -> Option<&ArmSpec> {
        self.arms.iter().find(|a| a.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.schema == SCHEMA_VERSION, "unsupported config schema {} (expected {SCHEMA_VERSION})", self.schema);
        ensure!(!self.problems.is_empty(), "at least one problem is required");
        ensure!(!self.arms.is_empty(), "at least one arm is required");
        ensure!(!self.seed_list().is_empty(), "seed list is empty");
        let mut names: Vec<&str> = self.arms.iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        ensure!(names.windows(2).all(|w| w[0] != w[1]), "arm names must be unique");
        let mut sanitized: Vec<String> = self.arms.iter().map(|a| sanitize(&a.name)).collect();
        sanitized.sort_unstable();
        ensure!(sanitized.windows(2).all(|w| w[0] != w[1]), "arm names collide once made file-safe");
        if let Some(r) = &self.reference_arm {
            ensure!(self.arm(r).is_some(), "reference arm '{r}' is not among the arms");
        }
        ensure!(self.dims.iter().all(|&d| d >= 1), "dimensions must be positive");
        for arm in &self.arms {
            if let PredictorSpec::Oracle(spec) = &arm.predictor {
                spec.validate()?;
            }
        }

        match self.experiment {
            ExperimentKind::Case2d => {
                ensure!(self.dims.is_empty() || self.dims == [2], "case2d runs in two dimensions only");
                ensure!(self.case2d.train_size >= 2 && self.case2d.grid_points >= 2, "case2d sizes too small");
            }
            ExperimentKind::SelectAcc => {
                ensure!(!self.dims.is_empty(), "select-acc needs dims");
                ensure!(self.dims.iter().all(|d| [5, 10].contains(d)), "select-acc dims must be 5 or 10");
                ensure!(!self.select_acc.generations.is_empty(), "select-acc needs recorded generations");
                self.select_acc.ga.validate()?;
            }
            ExperimentKind::Compare => {
                ensure!(!self.dims.is_empty(), "compare needs dims");
                ensure!(self.budget.is_some(), "compare needs a budget");
                for arm in &self.arms {
                    ensure!(arm.variant.is_some(), "compare arm '{}' needs a variant", arm.name);
                }
                LaeaConfig { budget: self.budget.unwrap_or_default(), ..self.laea }.validate()?;
            }
            ExperimentKind::Preselect => {
                ensure!(!self.dims.is_empty(), "preselect needs dims");
                ensure!(self.budget.is_some(), "preselect needs a budget");
                for arm in &self.arms {
                    ensure!(arm.strategy.is_some(), "preselect arm '{}' needs a strategy", arm.name);
                }
                ensure!(
                    self.arms.iter().any(|a| a.strategy == Some(PreselectStrategy::Random)),
                    "preselect needs a random-strategy arm as baseline"
                );
                PreselectConfig { budget: self.budget.unwrap_or_default(), ..self.preselect }.validate()?;
            }
            ExperimentKind::Timing => {
                for arm in &self.arms {
                    ensure!(
                        arm.predictor.is_prompt_based(),
                        "timing arm '{}' must use a prompt-based predictor",
                        arm.name
                    );
                }
                let t = &self.timing;
                ensure!(!t.dims.is_empty() && !t.precisions.is_empty(), "timing needs dims and precisions");
                ensure!(t.train_size >= 2 && t.test_size >= 1 && t.parallelism >= 1, "timing sizes too small");
            }
        }
        Ok(())
    }

    /// Reference arm for symbols: the configured one, else the first
    /// random-strategy arm for `preselect`, else the first arm.
    pub fn reference(&self) -> &ArmSpec {
        if let Some(r) = self.reference_arm.as_deref().and_then(|r| self.arm(r)) {
            return r;
        }
        if self.experiment == ExperimentKind::Preselect {
            if let Some(a) = self.arms.iter().find(|a| a.strategy == Some(PreselectStrategy::Random)) {
                return a;
            }
        }
        &self.arms[0]
    }

    pub fn dims_or(&self, default: &[usize]) -> Vec<usize> {
        if self.dims.is_empty() {
            default.to_vec()
        } else {
            self.dims.clone()
        }
    }
}

/// File-safe version of an arm name.
pub fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with('.') {
        format!("arm{s}")
    } else {
        s
    }
}
