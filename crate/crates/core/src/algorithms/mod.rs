//! Search procedures: LAEA and its regression-only variant, CoDE with
//! surrogate pre-selection, and the GA run that collects selection data.

mod ga_collect;
mod laea;
mod preselect;
mod result;

pub use ga_collect::{
    ga_collect_run, read_dataset_csv, write_dataset_csv, GaCollectConfig, GaDataset, GaRecord,
    DEFAULT_RECORDED_GENERATIONS,
};
pub use laea::{assisted_select_label, assisted_select_value, laea_run, LaeaConfig, Variant, WindowPolicy};
pub use preselect::{code_preselect_run, PreselectConfig, PreselectStrategy};
pub use result::{write_trace_csv, Archive, RunResult, TracePoint};
