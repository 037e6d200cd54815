//! Metrics, fold plans and the cross-validation driver.

mod cv;
mod folds;
mod metrics;

pub use cv::{run_cv, CvOptions, FoldResult, PredictionRow, Report, TaskReport};
pub use folds::{close_entities, frame_view, Fold, FoldPlan, Split};
pub use metrics::{accuracy, auroc, aurpc, mape, rmse, scc, Contingency, Prf};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("metric needs both positive and negative examples")]
    DegenerateLabels,
    #[error("invalid fold plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Learn(#[from] crate::learn::LearnError),
    #[error(transparent)]
    Dataset(#[from] crate::dataset::DatasetError),
}
