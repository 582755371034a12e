use super::{ConfusionMatrix, EvalError, Result};

/// A metric value plus whether a degenerate case (0/0 and the like) was
/// resolved by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub value: f64,
    pub degenerate: bool,
}

impl Score {
    fn ok(value: f64) -> Self {
        Self {
            value,
            degenerate: false,
        }
    }

    fn degenerate(value: f64) -> Self {
        Self {
            value,
            degenerate: true,
        }
    }
}

fn ratio(num: u64, den: u64) -> Score {
    if den == 0 {
        Score::degenerate(0.0)
    } else {
        Score::ok(num as f64 / den as f64)
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// How per-class precision and recall are combined into single numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Unweighted mean over classes.
    #[default]
    Macro,
    /// Mean weighted by class support.
    Weighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub precision: Score,
    pub recall: Score,
    pub f_score: Score,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicMetrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Averaged precision.
    pub precision: f64,
    /// Averaged recall.
    pub recall: f64,
    /// Harmonic mean of the averaged precision and recall.
    pub f_score: f64,
    /// Support-weighted or unweighted mean of the per-class F-scores.
    pub mean_class_f_score: f64,
    pub averaging: Averaging,
    /// True when any per-class ratio hit a zero denominator.
    pub degenerate: bool,
}

fn ensure_nonempty(cm: &ConfusionMatrix) -> Result<()> {
    if cm.n_classes() == 0 || cm.total() == 0 {
        Err(EvalError::Empty)
    } else {
        Ok(())
    }
}

/// Accuracy plus one-vs-rest precision, recall and F-score per class, averaged
/// with `averaging`.
pub fn basic_metrics(cm: &ConfusionMatrix, averaging: Averaging) -> Result<BasicMetrics> {
    ensure_nonempty(cm)?;
    let total = cm.total();
    let per_class: Vec<ClassMetrics> = (0..cm.n_classes())
        .map(|c| {
            let k = cm.class_counts(c);
            ClassMetrics {
                precision: ratio(k.tp, k.tp + k.fp),
                recall: ratio(k.tp, k.tp + k.fn_),
                f_score: ratio(2 * k.tp, 2 * k.tp + k.fp + k.fn_),
                support: k.tp + k.fn_,
            }
        })
        .collect();
    let weights: Vec<f64> = match averaging {
        Averaging::Macro => vec![1.0 / cm.n_classes() as f64; cm.n_classes()],
        Averaging::Weighted => per_class.iter().map(|m| m.support as f64 / total as f64).collect(),
    };
    let avg = |f: fn(&ClassMetrics) -> f64| -> f64 {
        per_class.iter().zip(&weights).map(|(m, w)| w * f(m)).sum()
    };
    let precision = avg(|m| m.precision.value);
    let recall = avg(|m| m.recall.value);
    let mean_class_f_score = avg(|m| m.f_score.value);
    let degenerate = per_class
        .iter()
        .any(|m| m.precision.degenerate || m.recall.degenerate || m.f_score.degenerate);
    Ok(BasicMetrics {
        accuracy: cm.trace() as f64 / total as f64,
        precision,
        recall,
        f_score: harmonic(precision, recall),
        mean_class_f_score,
        per_class,
        averaging,
        degenerate,
    })
}

/// Cohen's kappa, `(p_o - p_e) / (1 - p_e)`.
///
/// When chance agreement is total (`p_e = 1`) the value is 1 for perfect
/// observed agreement and 0 otherwise, flagged degenerate.
pub fn cohen_kappa(cm: &ConfusionMatrix) -> Result<Score> {
    ensure_nonempty(cm)?;
    let total = cm.total() as f64;
    let p_o = cm.trace() as f64 / total;
    let p_e = (0..cm.n_classes())
        .map(|i| cm.row_sum(i) as f64 * cm.col_sum(i) as f64)
        .sum::<f64>()
        / (total * total);
    if p_e >= 1.0 {
        return Ok(Score::degenerate(if p_o >= 1.0 { 1.0 } else { 0.0 }));
    }
    Ok(Score::ok((p_o - p_e) / (1.0 - p_e)))
}

/// Binary Matthews correlation from the four cell counts; zero when any
/// marginal is empty.
pub fn mcc_binary(tp: u64, fp: u64, fn_: u64, tn: u64) -> Score {
    let num = tp as i128 * tn as i128 - fp as i128 * fn_ as i128;
    let den = (tp + fp) as u128 * (tp + fn_) as u128 * (tn + fp) as u128 * (tn + fn_) as u128;
    if den == 0 {
        return Score::degenerate(0.0);
    }
    Score::ok(num as f64 / (den as f64).sqrt())
}

/// Matthews correlation for any number of classes:
/// `(c·s − Σ p_k t_k) / sqrt((s² − Σ p_k²)(s² − Σ t_k²))` with `c` the trace,
/// `s` the total, `p_k` predicted and `t_k` true class counts. For two classes
/// this equals the binary formula.
pub fn mcc(cm: &ConfusionMatrix) -> Result<Score> {
    ensure_nonempty(cm)?;
    let l = cm.n_classes();
    let s = cm.total() as i128;
    let c = cm.trace() as i128;
    let (mut pt, mut pp, mut tt) = (0i128, 0i128, 0i128);
    for k in 0..l {
        let p = cm.col_sum(k) as i128;
        let t = cm.row_sum(k) as i128;
        pt += p * t;
        pp += p * p;
        tt += t * t;
    }
    let num = c * s - pt;
    let den = (s * s - pp) as u128 * (s * s - tt) as u128;
    if den == 0 {
        return Ok(Score::degenerate(0.0));
    }
    Ok(Score::ok(num as f64 / (den as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(tp: u64, fp: u64, fn_: u64, tn: u64) -> ConfusionMatrix {
        // class 1 is the positive class
        ConfusionMatrix::from_rows(&[vec![tn, fp], vec![fn_, tp]]).unwrap()
    }

    #[test]
    fn hand_computed_binary_metrics() {
        let cm = binary(50, 10, 5, 35);
        let k = cm.class_counts(1);
        assert_eq!((k.tp, k.fp, k.fn_, k.tn), (50, 10, 5, 35));
        let m = basic_metrics(&cm, Averaging::Macro).unwrap();
        assert!((m.accuracy - 0.85).abs() < 1e-15);
        let pos = &m.per_class[1];
        assert!((pos.precision.value - 50.0 / 60.0).abs() < 1e-15);
        assert!((pos.recall.value - 50.0 / 55.0).abs() < 1e-15);
        assert!((pos.f_score.value - 100.0 / 115.0).abs() < 1e-15);
        assert!((pos.f_score.value - 0.8696).abs() < 1e-4);
        let expected_mcc = (50.0 * 35.0 - 10.0 * 5.0) / (60.0f64 * 55.0 * 45.0 * 40.0).sqrt();
        assert!((mcc(&cm).unwrap().value - expected_mcc).abs() < 1e-15);
        assert!((expected_mcc - 0.69752).abs() < 1e-5);
    }

    #[test]
    fn diagonal_matrix_is_perfect() {
        let cm = ConfusionMatrix::from_rows(&[vec![5, 0, 0], vec![0, 3, 0], vec![0, 0, 9]]).unwrap();
        let m = basic_metrics(&cm, Averaging::Macro).unwrap();
        assert_eq!((m.accuracy, m.precision, m.recall, m.f_score), (1.0, 1.0, 1.0, 1.0));
        assert_eq!(cohen_kappa(&cm).unwrap().value, 1.0);
        assert_eq!(mcc(&cm).unwrap().value, 1.0);
    }

    #[test]
    fn never_predicted_class_is_flagged() {
        let cm = ConfusionMatrix::from_rows(&[vec![5, 1, 0], vec![2, 3, 0], vec![1, 1, 0]]).unwrap();
        let m = basic_metrics(&cm, Averaging::Macro).unwrap();
        assert!(m.per_class[2].precision.degenerate);
        assert_eq!(m.per_class[2].precision.value, 0.0);
        assert!(m.degenerate);
    }

    #[test]
    fn kappa_examples() {
        let cm = ConfusionMatrix::from_rows(&[vec![40, 10], vec![10, 40]]).unwrap();
        assert!((cohen_kappa(&cm).unwrap().value - 0.6).abs() < 1e-12);
        // f_ij = row_i * col_j / total gives chance-level agreement
        let cm = ConfusionMatrix::from_rows(&[vec![6, 9, 15], vec![4, 6, 10], vec![10, 15, 25]]).unwrap();
        assert!(cohen_kappa(&cm).unwrap().value.abs() < 1e-12);
        let single = ConfusionMatrix::from_rows(&[vec![0, 0], vec![0, 7]]).unwrap();
        let k = cohen_kappa(&single).unwrap();
        assert!(k.degenerate && k.value == 1.0);
    }

    #[test]
    fn mcc_extremes() {
        assert_eq!(mcc(&binary(10, 0, 0, 10)).unwrap().value, 1.0);
        assert_eq!(mcc(&binary(0, 10, 10, 0)).unwrap().value, -1.0);
        let degenerate = mcc(&binary(10, 5, 0, 0)).unwrap();
        assert!(degenerate.degenerate && degenerate.value == 0.0);
    }

    #[test]
    fn empty_matrix_errors() {
        let cm = ConfusionMatrix::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(basic_metrics(&cm, Averaging::Macro).is_err());
        assert!(cohen_kappa(&cm).is_err());
        assert!(mcc(&cm).is_err());
    }

    #[test]
    fn f_score_lies_between_precision_and_recall() {
        let cm = ConfusionMatrix::from_rows(&[vec![10, 0, 0], vec![9, 1, 0], vec![0, 0, 1]]).unwrap();
        for averaging in [Averaging::Macro, Averaging::Weighted] {
            let m = basic_metrics(&cm, averaging).unwrap();
            let (lo, hi) = (m.precision.min(m.recall), m.precision.max(m.recall));
            assert!(lo <= m.f_score && m.f_score <= hi);
        }
    }
}
