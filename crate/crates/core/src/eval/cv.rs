use std::time::Instant;

use rayon::prelude::*;

use super::folds::{kfold_plan, FoldPlan};
use super::metrics::{basic_metrics, cohen_kappa, mcc, Averaging};
use super::roc::{roc_auc, roc_curve, RocPoint};
use super::{confusion, ConfusionMatrix, EvalError, Result};
use crate::dataset::{DamageClass, FeatureTable, FEATURE_NAMES};
use crate::models::ModelSpec;
use crate::preprocess::{fit_minmax, Frame};

/// Cross-validation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub stratify: bool,
    /// Min-max target range fitted on each training split; `None` disables scaling.
    pub normalize: Option<(f64, f64)>,
    /// Worker threads for fold-level parallelism; 0 uses the global pool.
    pub workers: usize,
    pub averaging: Averaging,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            folds: 10,
            seed: 42,
            stratify: true,
            normalize: Some((0.0, 1.0)),
            workers: 0,
            averaging: Averaging::Macro,
        }
    }
}

/// The comparison-table metrics of one model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricVector {
    pub accuracy: f64,
    pub roc_auc: f64,
    pub recall: f64,
    pub precision: f64,
    pub f_score: f64,
    pub cks: f64,
    pub mcc: f64,
    /// Seconds spent training and predicting, summed over folds.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    /// Reason the fold was skipped, if it was.
    pub skipped: Option<String>,
    pub confusion: Option<ConfusionMatrix>,
    pub accuracy: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub model: String,
    pub metrics: MetricVector,
    /// Pooled out-of-fold confusion matrix.
    pub confusion: ConfusionMatrix,
    pub folds: Vec<FoldOutcome>,
    /// One-vs-rest ROC curve per class from pooled scores (`None` when the
    /// class is absent from the evaluated rows or the model has no scores).
    pub roc_curves: Vec<Option<Vec<RocPoint>>>,
    /// Out-of-fold prediction per row; `None` for rows in skipped folds.
    pub predictions: Vec<Option<usize>>,
    /// Warnings: skipped folds, missing scores, regularized models.
    pub flags: Vec<String>,
}

struct FoldRun {
    outcome: FoldOutcome,
    test: Vec<usize>,
    predicted: Vec<usize>,
    scores: Option<Vec<Vec<f64>>>,
    notes: Vec<String>,
}

fn run_fold(
    x: &[Vec<f64>],
    y: &[usize],
    labels: &[String],
    spec: &ModelSpec,
    plan: &FoldPlan,
    fold: usize,
    config: &CvConfig,
) -> Result<FoldRun> {
    let n_classes = labels.len();
    let train = plan.train_indices(fold);
    let test = plan.test_indices(fold);
    let mut outcome = FoldOutcome {
        fold,
        train_size: train.len(),
        test_size: test.len(),
        skipped: None,
        confusion: None,
        accuracy: None,
        seconds: 0.0,
    };
    let first = y[train[0]];
    if train.iter().all(|&i| y[i] == first) {
        outcome.skipped = Some(format!("fold {fold}: training split holds a single class"));
        return Ok(FoldRun {
            outcome,
            test,
            predicted: Vec::new(),
            scores: None,
            notes: Vec::new(),
        });
    }

    let start = Instant::now();
    let mut train_x: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
    let mut test_x: Vec<Vec<f64>> = test.iter().map(|&i| x[i].clone()).collect();
    if let Some(range) = config.normalize {
        let names = (0..x[0].len()).map(|j| format!("x{j}")).collect();
        let model = fit_minmax(&Frame::new(names, train_x.clone())?, range)?;
        train_x = model.apply_rows(&train_x);
        test_x = model.apply_rows(&test_x);
    }
    let train_y: Vec<usize> = train.iter().map(|&i| y[i]).collect();
    let fitted = spec.fit(&train_x, &train_y, n_classes)?;
    let mut predicted = Vec::with_capacity(test.len());
    let mut scores = Some(Vec::with_capacity(test.len()));
    for row in &test_x {
        predicted.push(fitted.predict(row)?);
        match (fitted.scores(row)?, scores.as_mut()) {
            (Some(s), Some(all)) => all.push(s),
            _ => scores = None,
        }
    }
    outcome.seconds = start.elapsed().as_secs_f64();

    let truth: Vec<usize> = test.iter().map(|&i| y[i]).collect();
    let cm = confusion(&truth, &predicted, labels)?;
    outcome.accuracy = Some(cm.trace() as f64 / cm.total() as f64);
    outcome.confusion = Some(cm);
    Ok(FoldRun {
        outcome,
        test,
        predicted,
        scores,
        notes: fitted.notes().iter().map(|n| format!("fold {fold}: {n}")).collect(),
    })
}

/// k-fold cross-validation of one model on rows `x` with class indices `y`.
///
/// Each fold fits min-max scaling on its training split only. Metrics come
/// from the pooled out-of-fold predictions; ROC is the macro one-vs-rest AUC
/// of the pooled scores (0 when the model yields no scores). Folds whose
/// training split holds one class are skipped and flagged.
pub fn cross_validate(
    x: &[Vec<f64>],
    y: &[usize],
    labels: &[String],
    spec: &ModelSpec,
    plan: &FoldPlan,
    config: &CvConfig,
) -> Result<CvResult> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(EvalError::Empty);
    }
    if plan.n() != x.len() {
        return Err(EvalError::BadFolds(format!("plan covers {} rows, table has {}", plan.n(), x.len())));
    }
    if let Some(&bad) = y.iter().find(|&&l| l >= labels.len()) {
        return Err(EvalError::UnknownLabel(bad));
    }

    let job = || -> Result<Vec<FoldRun>> {
        (0..plan.k())
            .into_par_iter()
            .map(|f| run_fold(x, y, labels, spec, plan, f, config))
            .collect()
    };
    let runs = if config.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| EvalError::Pool(e.to_string()))?
            .install(job)?
    } else {
        job()?
    };

    let n_classes = labels.len();
    let mut pooled = ConfusionMatrix::zeros(labels.to_vec());
    let mut predictions = vec![None; x.len()];
    let mut truth = Vec::new();
    let mut scores = Some(Vec::new());
    let mut flags = Vec::new();
    let mut seconds = 0.0;
    let mut folds = Vec::with_capacity(runs.len());
    for run in runs {
        seconds += run.outcome.seconds;
        flags.extend(run.notes);
        if let Some(reason) = &run.outcome.skipped {
            flags.push(reason.clone());
        } else {
            for (&i, &p) in run.test.iter().zip(&run.predicted) {
                predictions[i] = Some(p);
                truth.push(y[i]);
            }
            match (run.scores, scores.as_mut()) {
                (Some(s), Some(all)) => all.extend(s),
                _ => scores = None,
            }
            if let Some(cm) = &run.outcome.confusion {
                pooled.merge(cm);
            }
        }
        folds.push(run.outcome);
    }
    if pooled.total() == 0 {
        return Err(EvalError::AllFoldsSkipped);
    }

    let basic = basic_metrics(&pooled, config.averaging)?;
    let mut roc_curves = vec![None; n_classes];
    let roc = match &scores {
        Some(s) => {
            for (c, curve) in roc_curves.iter_mut().enumerate() {
                let positive: Vec<bool> = truth.iter().map(|&t| t == c).collect();
                let column: Vec<f64> = s.iter().map(|r| r[c]).collect();
                *curve = roc_curve(&positive, &column);
            }
            match roc_auc(&truth, s, n_classes) {
                Ok(summary) => {
                    for c in &summary.skipped {
                        flags.push(format!("roc: class {} absent from evaluated rows", labels[*c]));
                    }
                    summary.macro_auc
                }
                Err(EvalError::SingleClass) => {
                    flags.push("roc: undefined for a single evaluated class".into());
                    0.0
                }
                Err(e) => return Err(e),
            }
        }
        None => {
            flags.push("roc: model produces no scores".into());
            0.0
        }
    };

    let metrics = MetricVector {
        accuracy: basic.accuracy,
        roc_auc: roc,
        recall: basic.recall,
        precision: basic.precision,
        f_score: basic.f_score,
        cks: cohen_kappa(&pooled)?.value,
        mcc: mcc(&pooled)?.value,
        wall_time: seconds,
    };
    Ok(CvResult {
        model: spec.name().to_string(),
        metrics,
        confusion: pooled,
        folds,
        roc_curves,
        predictions,
        flags,
    })
}

/// Cross-validates `spec` on a labeled feature table using the 18 features.
pub fn cross_validate_table(table: &FeatureTable, spec: &ModelSpec, config: &CvConfig) -> Result<CvResult> {
    let labels = table.labels().ok_or(EvalError::Unlabeled)?;
    let y: Vec<usize> = labels.iter().map(|c| c.index()).collect();
    let x = table.feature_matrix();
    let strata = config.stratify.then_some(y.as_slice());
    let plan = kfold_plan(x.len(), config.folds, config.seed, strata)?;
    let names: Vec<String> = DamageClass::ALL.iter().map(|c| c.to_string()).collect();
    debug_assert_eq!(FEATURE_NAMES.len(), x[0].len());
    cross_validate(&x, &y, &names, spec, &plan, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn blobs(seed: u64, spread: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let centres = [[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]];
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (c, centre) in centres.iter().enumerate() {
            for _ in 0..40 {
                x.push(vec![centre[0] + rng.random_range(-spread..spread), centre[1] + rng.random_range(-spread..spread)]);
                y.push(c);
            }
        }
        (x, y)
    }

    fn labels() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn separable_blobs_with_one_nn() {
        let (x, y) = blobs(5, 1.0);
        let plan = kfold_plan(x.len(), 10, 42, Some(&y)).unwrap();
        let r = cross_validate(&x, &y, &labels(), &ModelSpec::Knn { k: 1 }, &plan, &CvConfig::default()).unwrap();
        assert!(r.metrics.accuracy >= 0.99);
        assert!(r.metrics.roc_auc > 0.99);
        assert!(r.predictions.iter().all(Option::is_some));
        assert_eq!(r.confusion.total(), 120);
    }

    #[test]
    fn permuted_labels_are_near_chance() {
        let (x, mut y) = blobs(6, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        use rand::seq::SliceRandom;
        y.shuffle(&mut rng);
        let plan = kfold_plan(x.len(), 10, 42, Some(&y)).unwrap();
        let r = cross_validate(&x, &y, &labels(), &ModelSpec::Knn { k: 5 }, &plan, &CvConfig::default()).unwrap();
        assert!((r.metrics.accuracy - 1.0 / 3.0).abs() <= 0.1, "{}", r.metrics.accuracy);
        assert!(r.metrics.cks.abs() <= 0.1 + 0.05, "{}", r.metrics.cks);
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let (x, y) = blobs(7, 4.0);
        let plan = kfold_plan(x.len(), 5, 1, Some(&y)).unwrap();
        let spec: ModelSpec = "svm-rbf".parse().unwrap();
        let a = cross_validate(&x, &y, &labels(), &spec, &plan, &CvConfig { workers: 1, ..Default::default() }).unwrap();
        let b = cross_validate(&x, &y, &labels(), &spec, &plan, &CvConfig { workers: 4, ..Default::default() }).unwrap();
        assert_eq!(a.confusion, b.confusion);
        assert_eq!(a.predictions, b.predictions);
        assert_eq!(a.metrics.roc_auc, b.metrics.roc_auc);
    }

    #[test]
    fn single_class_training_fold_is_skipped() {
        // Holding out the only class-1 row leaves a single-class training split.
        let x = vec![vec![0.0], vec![0.1], vec![5.0]];
        let y = vec![0, 0, 1];
        let plan = kfold_plan(3, 3, 0, None).unwrap();
        let labels = vec!["a".to_string(), "b".to_string()];
        let r = cross_validate(&x, &y, &labels, &ModelSpec::Knn { k: 1 }, &plan, &CvConfig::default()).unwrap();
        let skipped = r.folds.iter().filter(|f| f.skipped.is_some()).count();
        assert_eq!(skipped, 1);
        assert!(r.flags.iter().any(|f| f.contains("single class")));
        assert_eq!(r.confusion.total(), 2);
    }
}
