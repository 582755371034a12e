use super::kernel::KernelSpec;
use super::{ModelError, Result};

/// Solver settings for one binary machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Box constraint on the multipliers.
    pub c: f64,
    /// Stopping tolerance on the maximal KKT violation.
    pub tol: f64,
    /// Maximum number of pair updates.
    pub max_iter: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            tol: 1e-3,
            max_iter: 1_000_000,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(ModelError::BadHyperparameter(format!("c = {} must be positive", self.c)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(ModelError::BadHyperparameter(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(ModelError::BadHyperparameter("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// A trained two-class soft-margin SVM.
///
/// Decision value `f(x) = Σ a_k t_k K(x_k, x) + b` over the stored support
/// vectors; every stored multiplier is strictly positive. Equality ignores the
/// training iteration count.
#[derive(Debug, Clone)]
pub struct BinarySvm {
    kernel: KernelSpec,
    c: f64,
    tol: f64,
    dim: usize,
    support: Vec<Vec<f64>>,
    alphas: Vec<f64>,
    labels: Vec<f64>,
    bias: f64,
    iterations: usize,
}

impl PartialEq for BinarySvm {
    fn eq(&self, other: &Self) -> bool {
        self.kernel == other.kernel
            && self.c == other.c
            && self.tol == other.tol
            && self.dim == other.dim
            && self.support == other.support
            && self.alphas == other.alphas
            && self.labels == other.labels
            && self.bias == other.bias
    }
}

impl BinarySvm {
    /// Rebuilds a model from stored parts (used by deserialization).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        kernel: KernelSpec,
        c: f64,
        tol: f64,
        dim: usize,
        support: Vec<Vec<f64>>,
        alphas: Vec<f64>,
        labels: Vec<f64>,
        bias: f64,
    ) -> Result<Self> {
        kernel.validate()?;
        if support.len() != alphas.len() || support.len() != labels.len() {
            return Err(ModelError::Corrupt("support vector arrays differ in length".into()));
        }
        if let Some(sv) = support.iter().find(|sv| sv.len() != dim) {
            return Err(ModelError::DimensionMismatch {
                expected: dim,
                found: sv.len(),
            });
        }
        if labels.iter().any(|&t| t != 1.0 && t != -1.0) {
            return Err(ModelError::Corrupt("labels must be +1 or -1".into()));
        }
        Ok(Self {
            kernel,
            c,
            tol,
            dim,
            support,
            alphas,
            labels,
            bias,
            iterations: 0,
        })
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    /// Number of pair updates performed during training.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn n_support(&self) -> usize {
        self.support.len()
    }

    /// `Σ a_k t_k` over the support vectors; zero at a feasible point.
    pub fn equality_residual(&self) -> f64 {
        self.alphas.iter().zip(&self.labels).map(|(a, t)| a * t).sum()
    }

    /// Dual objective `Σ a_k - ½ Σ_k Σ_j a_k a_j t_k t_j K(x_k, x_j)`.
    pub fn dual_objective(&self) -> f64 {
        let n = self.support.len();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += self.alphas[i]
                    * self.alphas[j]
                    * self.labels[i]
                    * self.labels[j]
                    * self.kernel.compute(&self.support[i], &self.support[j]);
            }
        }
        self.alphas.iter().sum::<f64>() - 0.5 * quad
    }

    /// Primal weight vector; meaningful only for the linear kernel.
    pub fn linear_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.dim];
        for ((sv, a), t) in self.support.iter().zip(&self.alphas).zip(&self.labels) {
            for (wj, xj) in w.iter_mut().zip(sv) {
                *wj += a * t * xj;
            }
        }
        w
    }

    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(self.decision_unchecked(x))
    }

    pub(crate) fn decision_unchecked(&self, x: &[f64]) -> f64 {
        let mut s = self.bias;
        for ((sv, a), t) in self.support.iter().zip(&self.alphas).zip(&self.labels) {
            s += a * t * self.kernel.compute(sv, x);
        }
        s
    }

    /// Sign of the decision value; exactly zero maps to +1.
    pub fn predict(&self, x: &[f64]) -> Result<i8> {
        Ok(if self.decision(x)? >= 0.0 { 1 } else { -1 })
    }
}

/// Trains a binary SVM by sequential minimal optimization.
///
/// Each step updates the maximal violating pair chosen with second-order
/// information (fully deterministic), and training stops once the KKT gap
/// `max_{I_up} -t G - min_{I_low} -t G` falls to `tol`.
pub fn train_binary(x: &[Vec<f64>], t: &[i8], kernel: KernelSpec, params: SvmParams) -> Result<BinarySvm> {
    kernel.validate()?;
    params.validate()?;
    let n = x.len();
    if n != t.len() {
        return Err(ModelError::LengthMismatch(n, t.len()));
    }
    if n == 0 {
        return Err(ModelError::Empty);
    }
    let dim = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != dim) {
        return Err(ModelError::DimensionMismatch {
            expected: dim,
            found: row.len(),
        });
    }
    if t.iter().any(|&v| v != 1 && v != -1) {
        return Err(ModelError::BadLabel("binary labels must be +1 or -1".into()));
    }
    if t.iter().all(|&v| v == t[0]) {
        return Err(ModelError::SingleClass);
    }

    let y: Vec<f64> = t.iter().map(|&v| f64::from(v)).collect();
    let k = kernel.gram(x);
    let c = params.c;
    let mut alpha = vec![0.0; n];
    // Gradient of ½aᵀQa - eᵀa with Q_ij = t_i t_j K_ij.
    let mut grad = vec![-1.0; n];
    let mut iterations = 0;

    loop {
        let (pair, gap) = select_pair(&k, &y, &alpha, &grad, c, n);
        if gap <= params.tol {
            break;
        }
        if iterations >= params.max_iter {
            return Err(ModelError::NotConverged {
                iterations,
                violation: gap,
            });
        }
        let Some((i, j)) = pair else { break };
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = positive_curvature(k[i * n + i] + k[j * n + j] - 2.0 * k[i * n + j]);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for s in 0..n {
            grad[s] += y[s] * (y[i] * k[s * n + i] * di + y[j] * k[s * n + j] * dj);
        }
    }

    let rho = bias_offset(&y, &alpha, &grad, c);
    let mut support = Vec::new();
    let mut alphas = Vec::new();
    let mut labels = Vec::new();
    for s in 0..n {
        if alpha[s] > 0.0 {
            support.push(x[s].clone());
            alphas.push(alpha[s]);
            labels.push(y[s]);
        }
    }
    Ok(BinarySvm {
        kernel,
        c,
        tol: params.tol,
        dim,
        support,
        alphas,
        labels,
        bias: -rho,
        iterations,
    })
}

const TAU: f64 = 1e-12;

fn positive_curvature(a: f64) -> f64 {
    if a > TAU {
        a
    } else {
        TAU
    }
}

fn in_up(y: f64, a: f64, c: f64) -> bool {
    (y > 0.0 && a < c) || (y < 0.0 && a > 0.0)
}

fn in_low(y: f64, a: f64, c: f64) -> bool {
    (y > 0.0 && a > 0.0) || (y < 0.0 && a < c)
}

/// Returns the working pair and the current KKT gap.
fn select_pair(k: &[f64], y: &[f64], alpha: &[f64], grad: &[f64], c: f64, n: usize) -> (Option<(usize, usize)>, f64) {
    let mut gmax = f64::NEG_INFINITY;
    let mut i_best = None;
    for s in 0..n {
        if in_up(y[s], alpha[s], c) {
            let v = -y[s] * grad[s];
            if v > gmax {
                gmax = v;
                i_best = Some(s);
            }
        }
    }
    let mut gmin = f64::INFINITY;
    let mut j_best = None;
    let mut best_gain = f64::INFINITY;
    for s in 0..n {
        if !in_low(y[s], alpha[s], c) {
            continue;
        }
        let v = -y[s] * grad[s];
        if v < gmin {
            gmin = v;
        }
        if let Some(i) = i_best {
            let b = gmax - v;
            if b > 0.0 {
                let a = positive_curvature(k[i * n + i] + k[s * n + s] - 2.0 * k[i * n + s]);
                let gain = -(b * b) / a;
                if gain < best_gain {
                    best_gain = gain;
                    j_best = Some(s);
                }
            }
        }
    }
    let gap = gmax - gmin;
    match (i_best, j_best) {
        (Some(i), Some(j)) => (Some((i, j)), gap),
        _ => (None, if gap.is_finite() { gap } else { 0.0 }),
    }
}

/// Offset `rho` with `f(x) = Σ a t K - rho`: the mean of `t G` over free
/// multipliers, or the midpoint of the feasible interval when none are free.
fn bias_offset(y: &[f64], alpha: &[f64], grad: &[f64], c: f64) -> f64 {
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for s in 0..y.len() {
        let yg = y[s] * grad[s];
        if alpha[s] >= c {
            if y[s] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[s] <= 0.0 {
            if y[s] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    if free > 0 {
        free_sum / free as f64
    } else {
        0.5 * (upper + lower)
    }
}
