use super::{EvalError, Result};

/// A point of an ROC curve reached by predicting positive for scores `>= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve of scores against binary truth. Tied scores enter together, so
/// ties produce a diagonal segment. Returns `None` when either class is absent.
pub fn roc_curve(positive: &[bool], scores: &[f64]) -> Option<Vec<RocPoint>> {
    let n_pos = positive.iter().filter(|p| **p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut points = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if positive[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            threshold: s,
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        });
    }
    Some(points)
}

/// Trapezoidal area under an ROC curve.
pub fn curve_area(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| 0.5 * (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr))
        .sum()
}

/// Binary AUC; `None` when either class is absent.
pub fn binary_auc(positive: &[bool], scores: &[f64]) -> Option<f64> {
    roc_curve(positive, scores).map(|c| curve_area(&c))
}

/// One-vs-rest AUC per class, with the unweighted mean over classes that have
/// both positives and negatives.
#[derive(Debug, Clone, PartialEq)]
pub struct RocSummary {
    pub per_class: Vec<Option<f64>>,
    pub macro_auc: f64,
    /// Classes skipped because they were absent from (or made up all of) the truth.
    pub skipped: Vec<usize>,
}

/// Macro one-vs-rest AUC from per-sample class scores (`scores[i][c]`).
pub fn roc_auc(truth: &[usize], scores: &[Vec<f64>], n_classes: usize) -> Result<RocSummary> {
    if truth.len() != scores.len() {
        return Err(EvalError::LengthMismatch(truth.len(), scores.len()));
    }
    if truth.is_empty() {
        return Err(EvalError::Empty);
    }
    if let Some(bad) = scores.iter().find(|s| s.len() != n_classes) {
        return Err(EvalError::Shape(format!(
            "expected {n_classes} scores per sample, got {}",
            bad.len()
        )));
    }
    let mut per_class = Vec::with_capacity(n_classes);
    let mut skipped = Vec::new();
    for c in 0..n_classes {
        let positive: Vec<bool> = truth.iter().map(|&t| t == c).collect();
        let column: Vec<f64> = scores.iter().map(|s| s[c]).collect();
        let auc = binary_auc(&positive, &column);
        if auc.is_none() {
            skipped.push(c);
        }
        per_class.push(auc);
    }
    let present: Vec<f64> = per_class.iter().flatten().copied().collect();
    if present.is_empty() {
        return Err(EvalError::SingleClass);
    }
    Ok(RocSummary {
        macro_auc: present.iter().sum::<f64>() / present.len() as f64,
        per_class,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_ordering() {
        assert_eq!(binary_auc(&[true, true, false, false], &[0.9, 0.8, 0.3, 0.1]), Some(1.0));
    }

    #[test]
    fn constant_scores() {
        assert_eq!(binary_auc(&[true, false, true, false, false], &[0.5; 5]), Some(0.5));
    }

    #[test]
    fn hand_counted_pairs() {
        assert_eq!(binary_auc(&[true, false, true, false], &[0.9, 0.8, 0.4, 0.2]), Some(0.75));
    }

    #[test]
    fn missing_class_is_skipped() {
        let truth = [0, 0, 1, 1];
        let scores = vec![vec![0.9, 0.1, 0.0], vec![0.8, 0.2, 0.0], vec![0.3, 0.7, 0.0], vec![0.1, 0.9, 0.0]];
        let s = roc_auc(&truth, &scores, 3).unwrap();
        assert_eq!(s.skipped, vec![2]);
        assert_eq!(s.macro_auc, 1.0);
        assert!(binary_auc(&[true, true], &[0.1, 0.2]).is_none());
    }

    #[test]
    fn curve_ends_at_one_one() {
        let c = roc_curve(&[true, false, false, true], &[0.3, 0.3, 0.1, 0.9]).unwrap();
        let last = c.last().unwrap();
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        assert_eq!(c[0].threshold, f64::INFINITY);
    }
}
