use super::{EvalError, Result};

/// Counts of (true class, predicted class) pairs; rows are true classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<String>,
    counts: Vec<u64>,
}

/// One-vs-rest counts for a single class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn zeros(labels: Vec<String>) -> Self {
        let l = labels.len();
        Self {
            labels,
            counts: vec![0; l * l],
        }
    }

    /// Builds a matrix from row-major counts.
    pub fn from_counts(labels: Vec<String>, rows: &[Vec<u64>]) -> Result<Self> {
        let l = labels.len();
        if rows.len() != l || rows.iter().any(|r| r.len() != l) {
            return Err(EvalError::Shape(format!("expected a {l}x{l} count matrix")));
        }
        Ok(Self {
            labels,
            counts: rows.concat(),
        })
    }

    /// Matrix with classes named `0..n`.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        Self::from_counts((0..rows.len()).map(|i| i.to_string()).collect(), rows)
    }

    pub fn n_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.n_classes() + predicted]
    }

    pub fn add(&mut self, truth: usize, predicted: usize, count: u64) {
        let l = self.n_classes();
        self.counts[truth * l + predicted] += count;
    }

    /// Cell-wise sum with a matrix over the same labels.
    pub fn merge(&mut self, other: &ConfusionMatrix) {
        assert_eq!(self.labels, other.labels, "label sets must match");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.get(i, i)).sum()
    }

    pub fn row(&self, truth: usize) -> &[u64] {
        let l = self.n_classes();
        &self.counts[truth * l..(truth + 1) * l]
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        self.row(truth).iter().sum()
    }

    pub fn col_sum(&self, predicted: usize) -> u64 {
        (0..self.n_classes()).map(|i| self.get(i, predicted)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.n_classes()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn class_counts(&self, class: usize) -> ClassCounts {
        let tp = self.get(class, class);
        let fn_ = self.row_sum(class) - tp;
        let fp = self.col_sum(class) - tp;
        let tn = self.total() - tp - fn_ - fp;
        ClassCounts { tp, fp, fn_, tn }
    }

    pub fn is_diagonal(&self) -> bool {
        let l = self.n_classes();
        (0..l).all(|i| (0..l).all(|j| i == j || self.get(i, j) == 0))
    }
}

/// Tallies paired true and predicted class indices into an `L x L` matrix.
pub fn confusion(truth: &[usize], predicted: &[usize], labels: &[String]) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(EvalError::LengthMismatch(truth.len(), predicted.len()));
    }
    if truth.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut cm = ConfusionMatrix::zeros(labels.to_vec());
    let l = labels.len();
    for (&t, &p) in truth.iter().zip(predicted) {
        if t >= l || p >= l {
            return Err(EvalError::UnknownLabel(t.max(p)));
        }
        cm.add(t, p, 1);
    }
    Ok(cm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn perfect_predictions_are_diagonal() {
        let y = [0, 1, 2, 2, 1, 0, 0];
        let cm = confusion(&y, &y, &names(3)).unwrap();
        assert!(cm.is_diagonal());
        assert_eq!(cm.trace(), 7);
    }

    #[test]
    fn binary_hand_count() {
        let cm = confusion(&[1, 1, 0, 0], &[1, 0, 0, 1], &names(2)).unwrap();
        assert_eq!((cm.get(1, 1), cm.get(1, 0), cm.get(0, 0), cm.get(0, 1)), (1, 1, 1, 1));
    }

    #[test]
    fn errors() {
        assert!(matches!(confusion(&[], &[], &names(2)), Err(EvalError::Empty)));
        assert!(matches!(confusion(&[0], &[0, 1], &names(2)), Err(EvalError::LengthMismatch(1, 2))));
        assert!(matches!(confusion(&[0], &[3], &names(2)), Err(EvalError::UnknownLabel(3))));
    }

    #[test]
    fn one_vs_rest_counts_partition_total() {
        let cm = ConfusionMatrix::from_rows(&[vec![8, 2, 0], vec![1, 7, 2], vec![0, 3, 7]]).unwrap();
        let mut tp_sum = 0;
        for c in 0..3 {
            let k = cm.class_counts(c);
            assert_eq!(k.tp + k.fp + k.fn_ + k.tn, cm.total());
            tp_sum += k.tp;
        }
        assert_eq!(tp_sum, cm.trace());
    }
}
