//! Predictive power score: how much better a shallow single-feature tree
//! predicts a target than a naive constant model, measured out of fold.
//!
//! Numeric targets: `max(0, 1 - MAE_tree / MAE_median)`, the baseline being the
//! training-fold median. Categorical targets:
//! `max(0, (F_tree - F_naive) / (1 - F_naive))` with support-weighted F-scores
//! and the training-fold majority class as the naive model.

use rayon::prelude::*;

use super::{Frame, PreprocessError, Result};
use crate::eval::{basic_metrics, confusion, kfold_plan, Averaging, FoldPlan};
use crate::tree::{DecisionTree, Target, TreeParams};

/// Maximum depth of the per-cell trees.
pub const PPS_TREE_DEPTH: usize = 4;
/// Minimum rows for a score.
pub const PPS_MIN_ROWS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpsMetric {
    MeanAbsoluteError,
    WeightedFScore,
}

impl PpsMetric {
    pub fn name(self) -> &'static str {
        match self {
            PpsMetric::MeanAbsoluteError => "mae",
            PpsMetric::WeightedFScore => "weighted_f1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpsCell {
    pub score: f64,
    pub metric: PpsMetric,
    /// Out-of-fold error (MAE) or F-score of the tree.
    pub model_metric: f64,
    /// Same quantity for the naive baseline.
    pub baseline_metric: f64,
    /// Target constant (or baseline already perfect): score fixed at 0.
    pub degenerate: bool,
}

/// Scores for every ordered (predictor, target) pair of a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PpsReport {
    pub names: Vec<String>,
    /// `cells[p][t]`: predictor `p` predicting target `t`.
    pub cells: Vec<Vec<PpsCell>>,
}

impl PpsReport {
    pub fn score(&self, predictor: usize, target: usize) -> f64 {
        self.cells[predictor][target].score
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn tree_params() -> TreeParams {
    TreeParams {
        max_depth: PPS_TREE_DEPTH,
        min_samples_leaf: 1,
        min_samples_split: 2,
    }
}

fn numeric_cell(x: &[f64], y: &[f64], plan: &FoldPlan) -> PpsCell {
    let n = x.len();
    let (mut model_err, mut base_err) = (0.0, 0.0);
    for f in 0..plan.k() {
        let train = plan.train_indices(f);
        let test = plan.test_indices(f);
        let xs: Vec<Vec<f64>> = train.iter().map(|&i| vec![x[i]]).collect();
        let ys: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let tree = DecisionTree::fit(&xs, Target::Values(&ys), tree_params());
        let mut ys_sorted = ys;
        let base = median(&mut ys_sorted);
        for &i in &test {
            model_err += (tree.predict_value(&[x[i]]) - y[i]).abs();
            base_err += (base - y[i]).abs();
        }
    }
    let (model_mae, base_mae) = (model_err / n as f64, base_err / n as f64);
    let degenerate = base_mae <= 0.0;
    PpsCell {
        score: if degenerate { 0.0 } else { (1.0 - model_mae / base_mae).max(0.0) },
        metric: PpsMetric::MeanAbsoluteError,
        model_metric: model_mae,
        baseline_metric: base_mae,
        degenerate,
    }
}

fn categorical_cell(x: &[f64], y: &[f64], plan: &FoldPlan) -> PpsCell {
    let labels: Vec<usize> = y.iter().map(|v| v.max(0.0).round() as usize).collect();
    let n_classes = labels.iter().max().map_or(1, |m| m + 1);
    let names: Vec<String> = (0..n_classes).map(|c| c.to_string()).collect();
    let mut truth = Vec::with_capacity(x.len());
    let mut model_pred = Vec::with_capacity(x.len());
    let mut naive_pred = Vec::with_capacity(x.len());
    for f in 0..plan.k() {
        let train = plan.train_indices(f);
        let xs: Vec<Vec<f64>> = train.iter().map(|&i| vec![x[i]]).collect();
        let ys: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
        let tree = DecisionTree::fit(&xs, Target::Classes { labels: &ys, n_classes }, tree_params());
        let mut counts = vec![0usize; n_classes];
        ys.iter().for_each(|&c| counts[c] += 1);
        let majority = (0..n_classes).fold(0, |best, c| if counts[c] > counts[best] { c } else { best });
        for i in plan.test_indices(f) {
            truth.push(labels[i]);
            model_pred.push(tree.predict_class(&[x[i]]));
            naive_pred.push(majority);
        }
    }
    let weighted_f = |pred: &[usize]| {
        let cm = confusion(&truth, pred, &names).expect("labels are in range");
        basic_metrics(&cm, Averaging::Weighted)
            .expect("matrix is non-empty")
            .mean_class_f_score
    };
    let f_model = weighted_f(&model_pred);
    let f_naive = weighted_f(&naive_pred);
    let degenerate = f_naive >= 1.0;
    PpsCell {
        score: if degenerate {
            0.0
        } else {
            ((f_model - f_naive) / (1.0 - f_naive)).max(0.0)
        },
        metric: PpsMetric::WeightedFScore,
        model_metric: f_model,
        baseline_metric: f_naive,
        degenerate,
    }
}

/// Self-prediction cell: score 1 and a perfect model metric, keeping the
/// cross-validated baseline of the column.
fn perfect(y: &[f64], categorical: bool, plan: &FoldPlan) -> PpsCell {
    let fitted = if categorical {
        categorical_cell(y, y, plan)
    } else {
        numeric_cell(y, y, plan)
    };
    PpsCell {
        score: 1.0,
        model_metric: match fitted.metric {
            PpsMetric::MeanAbsoluteError => 0.0,
            PpsMetric::WeightedFScore => 1.0,
        },
        degenerate: false,
        ..fitted
    }
}

fn score_with_plan(x: &[f64], y: &[f64], categorical: bool, plan: &FoldPlan) -> PpsCell {
    let constant = y.iter().all(|v| *v == y[0]);
    if x == y && !constant {
        return perfect(y, categorical, plan);
    }
    if categorical {
        categorical_cell(x, y, plan)
    } else {
        numeric_cell(x, y, plan)
    }
}

fn check(n: usize, folds: usize) -> Result<()> {
    if folds < 2 {
        return Err(PreprocessError::BadFolds(folds));
    }
    if n < PPS_MIN_ROWS {
        return Err(PreprocessError::TooFewRows {
            needed: PPS_MIN_ROWS,
            found: n,
        });
    }
    Ok(())
}

/// Predictive power of `x` for `y`.
pub fn pps_score(x: &[f64], y: &[f64], categorical: bool, folds: usize, seed: u64) -> Result<PpsCell> {
    check(x.len(), folds)?;
    let plan = kfold_plan(x.len(), folds, seed, None).map_err(|_| PreprocessError::BadFolds(folds))?;
    Ok(score_with_plan(x, y, categorical, &plan))
}

/// Full predictor-by-target matrix; the diagonal is 1 by definition. Cells are
/// computed in parallel and share one fold plan.
pub fn pps_matrix(frame: &Frame, folds: usize, seed: u64) -> Result<PpsReport> {
    let n = frame.n_rows();
    check(n, folds)?;
    let plan = kfold_plan(n, folds, seed, None).map_err(|_| PreprocessError::BadFolds(folds))?;
    let p = frame.n_cols();
    let columns: Vec<Vec<f64>> = (0..p).map(|j| frame.column(j)).collect();
    let cells: Vec<PpsCell> = (0..p * p)
        .into_par_iter()
        .map(|k| {
            let (pred, target) = (k / p, k % p);
            let categorical = frame.is_categorical(target);
            if pred == target {
                perfect(&columns[target], categorical, &plan)
            } else {
                score_with_plan(&columns[pred], &columns[target], categorical, &plan)
            }
        })
        .collect();
    Ok(PpsReport {
        names: frame.names().to_vec(),
        cells: cells.chunks(p).map(|c| c.to_vec()).collect(),
    })
}
