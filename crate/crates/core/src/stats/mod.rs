//! Selection metrics, rank statistics and the rank-sum test behind every
//! results table. Lower objective values are better throughout.

mod descriptive;
mod metrics;
mod ranks;
mod wilcoxon;

pub use descriptive::{mean, sample_std};
pub use metrics::{accuracy, precision_recall_f1, ConfusionCounts};
pub use ranks::{mean_rank, midranks};
pub use wilcoxon::{
    wilcoxon_exact_p, wilcoxon_normal_p, wilcoxon_rank_sum, StatOutcome, Symbol, TestMethod, DEFAULT_ALPHA,
    EXACT_MAX_COMBINED,
};
