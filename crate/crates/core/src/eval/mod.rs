//! Confusion matrices, classification metrics, ROC analysis, k-fold planning
//! and the cross-validation harness.

mod confusion;
mod cv;
mod folds;
mod metrics;
mod report;
mod roc;

pub use confusion::{confusion, ClassCounts, ConfusionMatrix};
pub use cv::{cross_validate, cross_validate_table, CvConfig, CvResult, FoldOutcome, MetricVector};
pub use folds::{kfold_plan, FoldPlan};
pub use metrics::{
    basic_metrics, cohen_kappa, mcc, mcc_binary, Averaging, BasicMetrics, ClassMetrics, Score,
};
pub use report::{
    class_prediction_error, comparison_csv, confusion_csv, prediction_error_csv, roc_points_csv,
    ClassErrorRow, ComparisonRow, COMPARISON_HEADER,
};
pub use roc::{binary_auc, curve_area, roc_auc, roc_curve, RocPoint, RocSummary};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("no samples to evaluate")]
    Empty,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("label {0} is outside the label index")]
    UnknownLabel(usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("every class is absent from or saturates the truth labels")]
    SingleClass,
    #[error("invalid fold configuration: {0}")]
    BadFolds(String),
    #[error("table is unlabeled")]
    Unlabeled,
    #[error("every fold was skipped")]
    AllFoldsSkipped,
    #[error("preprocessing: {0}")]
    Preprocess(#[from] crate::preprocess::PreprocessError),
    #[error("model: {0}")]
    Model(#[from] crate::models::ModelError),
    #[error("thread pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, EvalError>;
