use std::fmt::Write as _;

use super::cv::MetricVector;
use super::roc::RocPoint;
use super::ConfusionMatrix;

/// Support and per-predicted-class counts for one true class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassErrorRow {
    pub class: String,
    pub support: u64,
    pub predicted: Vec<u64>,
}

/// Rows of the confusion matrix as stacked-bar data, one per true class.
pub fn class_prediction_error(cm: &ConfusionMatrix) -> Vec<ClassErrorRow> {
    (0..cm.n_classes())
        .map(|t| ClassErrorRow {
            class: cm.labels()[t].clone(),
            support: cm.row_sum(t),
            predicted: cm.row(t).to_vec(),
        })
        .collect()
}

/// One line of the model comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub id: String,
    pub model: String,
    pub metrics: MetricVector,
}

pub const COMPARISON_HEADER: &str = "ID,Model,Accuracy,ROC,Recall,Precision,F-Score,CKS,MCC,Time/sec";

/// Comparison table sorted by descending accuracy (ties keep input order).
pub fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut sorted: Vec<&ComparisonRow> = rows.iter().collect();
    sorted.sort_by(|a, b| b.metrics.accuracy.total_cmp(&a.metrics.accuracy));
    let mut out = String::from(COMPARISON_HEADER);
    out.push('\n');
    for r in sorted {
        let m = &r.metrics;
        let _ = writeln!(
            out,
            "{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4},{:.3}",
            r.id, r.model, m.accuracy, m.roc_auc, m.recall, m.precision, m.f_score, m.cks, m.mcc, m.wall_time
        );
    }
    out
}

/// Confusion matrix with true classes as rows and predicted classes as columns.
pub fn confusion_csv(cm: &ConfusionMatrix) -> String {
    let mut out = String::from("true\\predicted");
    for l in cm.labels() {
        let _ = write!(out, ",{l}");
    }
    out.push('\n');
    for t in 0..cm.n_classes() {
        out.push_str(&cm.labels()[t]);
        for v in cm.row(t) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn prediction_error_csv(rows: &[ClassErrorRow], labels: &[String]) -> String {
    let mut out = String::from("class,support");
    for l in labels {
        let _ = write!(out, ",predicted_{l}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{}", r.class, r.support);
        for v in &r.predicted {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// ROC curve points of every class that has a curve.
pub fn roc_points_csv(labels: &[String], curves: &[Option<Vec<RocPoint>>]) -> String {
    let mut out = String::from("class,threshold,fpr,tpr\n");
    for (label, curve) in labels.iter().zip(curves) {
        for p in curve.iter().flatten() {
            let _ = writeln!(out, "{label},{:?},{:?},{:?}", p.threshold, p.fpr, p.tpr);
        }
    }
    out
}
