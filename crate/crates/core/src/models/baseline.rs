use nalgebra::{DMatrix, DVector};

use super::kernel::squared_distance;
use super::{ModelError, Result};
use crate::tree::{DecisionTree, Leaf, Target, TreeParams};

fn check_training(x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<usize> {
    if x.len() != y.len() {
        return Err(ModelError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(ModelError::Empty);
    }
    let dim = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != dim) {
        return Err(ModelError::DimensionMismatch {
            expected: dim,
            found: row.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&l| l >= n_classes) {
        return Err(ModelError::BadLabel(format!("label {bad} with {n_classes} classes")));
    }
    Ok(dim)
}

fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            expected,
            found: x.len(),
        })
    }
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for c in 1..scores.len() {
        if scores[c] > scores[best] {
            best = c;
        }
    }
    best
}

/// Softmax of log-scores; `-inf` entries get probability 0.
fn softmax(log: &[f64]) -> Vec<f64> {
    let top = log.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = log.iter().map(|&v| (v - top).exp()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|v| v / total).collect()
}

/// k-nearest-neighbour majority vote over Euclidean distance.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    k: usize,
    n_classes: usize,
    x: Vec<Vec<f64>>,
    y: Vec<usize>,
}

pub const DEFAULT_K: usize = 5;

impl Knn {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, k: usize) -> Result<Self> {
        check_training(x, y, n_classes)?;
        if k == 0 {
            return Err(ModelError::BadHyperparameter("k must be at least 1".into()));
        }
        Ok(Self {
            k,
            n_classes,
            x: x.to_vec(),
            y: y.to_vec(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Indices of the `k` nearest training rows, nearest first (ties by index).
    fn neighbours(&self, q: &[f64]) -> Vec<(f64, usize)> {
        let mut d: Vec<(f64, usize)> = self.x.iter().enumerate().map(|(i, r)| (squared_distance(r, q), i)).collect();
        let k = self.k.min(d.len());
        let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < d.len() {
            d.select_nth_unstable_by(k - 1, cmp);
            d.truncate(k);
        }
        d.sort_by(cmp);
        d
    }

    /// Vote fraction per class.
    pub fn scores(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.x[0].len(), q)?;
        let nb = self.neighbours(q);
        let mut s = vec![0.0; self.n_classes];
        for &(_, i) in &nb {
            s[self.y[i]] += 1.0 / nb.len() as f64;
        }
        Ok(s)
    }

    /// Majority class; vote ties go to the tied class whose nearest member is
    /// closest.
    pub fn predict(&self, q: &[f64]) -> Result<usize> {
        check_dim(self.x[0].len(), q)?;
        let nb = self.neighbours(q);
        let mut votes = vec![0usize; self.n_classes];
        for &(_, i) in &nb {
            votes[self.y[i]] += 1;
        }
        let top = *votes.iter().max().unwrap();
        Ok(nb.iter().map(|&(_, i)| self.y[i]).find(|&c| votes[c] == top).unwrap())
    }
}

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Gaussian naive Bayes with per-class feature variances floored at
/// [`VARIANCE_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    log_priors: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
}

impl GaussianNb {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<Self> {
        let dim = check_training(x, y, n_classes)?;
        let mut counts = vec![0usize; n_classes];
        let mut means = vec![vec![0.0; dim]; n_classes];
        for (row, &c) in x.iter().zip(y) {
            counts[c] += 1;
            for (m, v) in means[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        for c in 0..n_classes {
            if counts[c] > 0 {
                means[c].iter_mut().for_each(|m| *m /= counts[c] as f64);
            }
        }
        let mut variances = vec![vec![0.0; dim]; n_classes];
        for (row, &c) in x.iter().zip(y) {
            for j in 0..dim {
                variances[c][j] += (row[j] - means[c][j]).powi(2);
            }
        }
        for c in 0..n_classes {
            for v in &mut variances[c] {
                *v = if counts[c] > 0 { *v / counts[c] as f64 } else { 0.0 };
                *v = v.max(VARIANCE_FLOOR);
            }
        }
        let n = x.len() as f64;
        let log_priors = counts.iter().map(|&k| if k == 0 { f64::NEG_INFINITY } else { (k as f64 / n).ln() }).collect();
        Ok(Self {
            log_priors,
            means,
            variances,
        })
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn variances(&self) -> &[Vec<f64>] {
        &self.variances
    }

    fn log_joint(&self, q: &[f64]) -> Vec<f64> {
        (0..self.log_priors.len())
            .map(|c| {
                if self.log_priors[c] == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let mut s = self.log_priors[c];
                for ((x, m), v) in q.iter().zip(&self.means[c]).zip(&self.variances[c]) {
                    s -= 0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - m).powi(2) / v);
                }
                s
            })
            .collect()
    }

    /// Posterior class probabilities.
    pub fn scores(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.means[0].len(), q)?;
        Ok(softmax(&self.log_joint(q)))
    }

    pub fn predict(&self, q: &[f64]) -> Result<usize> {
        check_dim(self.means[0].len(), q)?;
        Ok(argmax(&self.log_joint(q)))
    }
}

/// CART classifier; scores are the leaf class distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Cart {
    tree: DecisionTree,
    n_classes: usize,
}

impl Cart {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize, params: TreeParams) -> Result<Self> {
        check_training(x, y, n_classes)?;
        if params.min_samples_leaf == 0 {
            return Err(ModelError::BadHyperparameter("min_samples_leaf must be at least 1".into()));
        }
        let tree = DecisionTree::fit(x, Target::Classes { labels: y, n_classes }, params);
        Ok(Self { tree, n_classes })
    }

    pub fn tree(&self) -> &DecisionTree {
        &self.tree
    }

    pub fn scores(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.tree.n_features(), q)?;
        Ok(match self.tree.leaf(q) {
            Leaf::Class { distribution, .. } => distribution.clone(),
            Leaf::Value(_) => vec![0.0; self.n_classes],
        })
    }

    pub fn predict(&self, q: &[f64]) -> Result<usize> {
        check_dim(self.tree.n_features(), q)?;
        Ok(self.tree.predict_class(q))
    }
}

/// Relative eigenvalue threshold below which a covariance counts as singular.
const SINGULAR_RATIO: f64 = 1e-12;

/// Adds `1e-6 · trace / dim` to the diagonal when `cov` is (near) singular.
/// Returns the inverse, the log-determinant and whether regularization applied.
fn invert_covariance(mut cov: DMatrix<f64>) -> (DMatrix<f64>, f64, bool) {
    let dim = cov.nrows();
    let eig = cov.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().copied().fold(0.0f64, |a, b| a.max(b.abs()));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let mut regularized = false;
    if !(min > SINGULAR_RATIO * max) {
        let trace = cov.trace();
        let ridge = if trace > 0.0 { 1e-6 * trace / dim as f64 } else { 1e-6 };
        for i in 0..dim {
            cov[(i, i)] += ridge;
        }
        regularized = true;
    }
    let eig = cov.symmetric_eigen();
    let mut inv = DMatrix::zeros(dim, dim);
    let mut log_det = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let lambda = lambda.max(f64::MIN_POSITIVE);
        log_det += lambda.ln();
        let v = eig.eigenvectors.column(k);
        inv += (v * v.transpose()) / lambda;
    }
    (inv, log_det, regularized)
}

fn class_moments(x: &[Vec<f64>], y: &[usize], n_classes: usize, dim: usize) -> (Vec<usize>, Vec<DVector<f64>>) {
    let mut counts = vec![0usize; n_classes];
    let mut means = vec![DVector::zeros(dim); n_classes];
    for (row, &c) in x.iter().zip(y) {
        counts[c] += 1;
        means[c] += DVector::from_column_slice(row);
    }
    for c in 0..n_classes {
        if counts[c] > 0 {
            means[c] /= counts[c] as f64;
        }
    }
    (counts, means)
}

fn log_priors(counts: &[usize]) -> Vec<f64> {
    let n: usize = counts.iter().sum();
    counts.iter().map(|&k| if k == 0 { f64::NEG_INFINITY } else { (k as f64 / n as f64).ln() }).collect()
}

/// Linear discriminant analysis with a pooled within-class covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct Lda {
    means: Vec<DVector<f64>>,
    log_priors: Vec<f64>,
    precision: DMatrix<f64>,
    regularized: bool,
}

impl Lda {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<Self> {
        let dim = check_training(x, y, n_classes)?;
        let (counts, means) = class_moments(x, y, n_classes, dim);
        let present = counts.iter().filter(|&&k| k > 0).count();
        let mut cov = DMatrix::zeros(dim, dim);
        for (row, &c) in x.iter().zip(y) {
            let d = DVector::from_column_slice(row) - &means[c];
            cov += &d * d.transpose();
        }
        let dof = x.len().saturating_sub(present).max(1);
        cov /= dof as f64;
        let (precision, _, regularized) = invert_covariance(cov);
        Ok(Self {
            means,
            log_priors: log_priors(&counts),
            precision,
            regularized,
        })
    }

    /// Whether the pooled covariance needed diagonal regularization.
    pub fn regularized(&self) -> bool {
        self.regularized
    }

    fn discriminants(&self, q: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(q);
        self.means
            .iter()
            .zip(&self.log_priors)
            .map(|(m, &lp)| {
                if lp == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let pm = &self.precision * m;
                v.dot(&pm) - 0.5 * m.dot(&pm) + lp
            })
            .collect()
    }

    pub fn scores(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.precision.nrows(), q)?;
        Ok(softmax(&self.discriminants(q)))
    }

    pub fn predict(&self, q: &[f64]) -> Result<usize> {
        check_dim(self.precision.nrows(), q)?;
        Ok(argmax(&self.discriminants(q)))
    }
}

/// Quadratic discriminant analysis with per-class covariances.
#[derive(Debug, Clone, PartialEq)]
pub struct Qda {
    means: Vec<DVector<f64>>,
    log_priors: Vec<f64>,
    precisions: Vec<DMatrix<f64>>,
    log_dets: Vec<f64>,
    regularized: Vec<bool>,
}

impl Qda {
    pub fn fit(x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<Self> {
        let dim = check_training(x, y, n_classes)?;
        let (counts, means) = class_moments(x, y, n_classes, dim);
        let mut covs = vec![DMatrix::zeros(dim, dim); n_classes];
        for (row, &c) in x.iter().zip(y) {
            let d = DVector::from_column_slice(row) - &means[c];
            covs[c] += &d * d.transpose();
        }
        let mut precisions = Vec::with_capacity(n_classes);
        let mut log_dets = Vec::with_capacity(n_classes);
        let mut regularized = Vec::with_capacity(n_classes);
        for (c, mut cov) in covs.into_iter().enumerate() {
            cov /= counts[c].saturating_sub(1).max(1) as f64;
            for i in 0..dim {
                cov[(i, i)] = cov[(i, i)].max(VARIANCE_FLOOR);
            }
            let (p, ld, r) = invert_covariance(cov);
            precisions.push(p);
            log_dets.push(ld);
            regularized.push(r && counts[c] > 0);
        }
        Ok(Self {
            means,
            log_priors: log_priors(&counts),
            precisions,
            log_dets,
            regularized,
        })
    }

    /// Per-class flags: whether that covariance needed regularization.
    pub fn regularized(&self) -> &[bool] {
        &self.regularized
    }

    fn discriminants(&self, q: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(q);
        (0..self.means.len())
            .map(|c| {
                if self.log_priors[c] == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let d = &v - &self.means[c];
                let maha = d.dot(&(&self.precisions[c] * &d));
                -0.5 * self.log_dets[c] - 0.5 * maha + self.log_priors[c]
            })
            .collect()
    }

    pub fn scores(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.means[0].len(), q)?;
        Ok(softmax(&self.discriminants(q)))
    }

    pub fn predict(&self, q: &[f64]) -> Result<usize> {
        check_dim(self.means[0].len(), q)?;
        Ok(argmax(&self.discriminants(q)))
    }
}
