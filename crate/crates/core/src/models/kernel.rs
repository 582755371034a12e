use std::fmt;

use super::{ModelError, Result};

/// Kernel family and parameters.
///
/// `GaussianLaplace` uses the plain (non-squared) Euclidean distance,
/// `exp(-gamma * |u - v|)`, which is a Laplacian kernel despite the name; `Rbf`
/// is the usual squared-distance Gaussian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `(tau + x·y)^degree`
    Polynomial { tau: f64, degree: u32 },
    /// `exp(-|x - y|² / (2 sigma²))`
    Rbf { sigma: f64 },
    /// `exp(-gamma |x - y|)`
    GaussianLaplace { gamma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Polynomial { tau, degree } => {
                if degree < 1 || !tau.is_finite() {
                    return Err(ModelError::BadKernel(format!("polynomial tau={tau} degree={degree}")));
                }
            }
            KernelSpec::Rbf { sigma } => {
                if !(sigma.is_finite() && sigma > 0.0) {
                    return Err(ModelError::BadKernel(format!("rbf sigma={sigma}")));
                }
            }
            KernelSpec::GaussianLaplace { gamma } => {
                if !(gamma.is_finite() && gamma > 0.0) {
                    return Err(ModelError::BadKernel(format!("gaussian gamma={gamma}")));
                }
            }
        }
        Ok(())
    }

    /// Kernel value with a dimension check.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(ModelError::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        Ok(self.compute(x, y))
    }

    pub(crate) fn compute(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        match *self {
            KernelSpec::Polynomial { tau, degree } => {
                let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
                (tau + dot).powi(degree as i32)
            }
            KernelSpec::Rbf { sigma } => (-squared_distance(x, y) / (2.0 * sigma * sigma)).exp(),
            KernelSpec::GaussianLaplace { gamma } => (-gamma * squared_distance(x, y).sqrt()).exp(),
        }
    }

    /// Symmetric Gram matrix of `rows`, row-major.
    pub fn gram(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        let n = rows.len();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.compute(&rows[i], &rows[j]);
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        k
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Polynomial { tau, degree } => write!(f, "polynomial tau={tau:?} degree={degree}"),
            KernelSpec::Rbf { sigma } => write!(f, "rbf sigma={sigma:?}"),
            KernelSpec::GaussianLaplace { gamma } => write!(f, "gaussian gamma={gamma:?}"),
        }
    }
}

pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Median Euclidean distance over all row pairs (0 for fewer than two rows).
pub fn median_pairwise_distance(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mut d = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            d.push(squared_distance(&rows[i], &rows[j]));
        }
    }
    if d.is_empty() {
        return 0.0;
    }
    let mid = d.len() / 2;
    let (_, upper, _) = d.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    let median_sq = if d.len() % 2 == 1 {
        upper
    } else {
        let lower = d[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    };
    median_sq.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rbf_is_one_on_the_diagonal() {
        let k = KernelSpec::Rbf { sigma: 0.3 };
        assert_eq!(k.eval(&[1.0, -2.0, 5.0], &[1.0, -2.0, 5.0]).unwrap(), 1.0);
    }

    #[test]
    fn linear_polynomial_is_dot_product() {
        let k = KernelSpec::Polynomial { tau: 0.0, degree: 1 };
        assert_eq!(k.eval(&[1.0, 2.0, 3.0], &[4.0, -5.0, 6.0]).unwrap(), 12.0);
    }

    #[test]
    fn laplace_uses_plain_distance() {
        let k = KernelSpec::GaussianLaplace { gamma: 1.0 };
        let v = k.eval(&[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((v - (-5.0f64).exp()).abs() < 1e-15);
        assert!((v - 6.7379e-3).abs() < 1e-7);
    }

    #[test]
    fn dimension_mismatch() {
        let k = KernelSpec::Rbf { sigma: 1.0 };
        assert!(matches!(k.eval(&[1.0], &[1.0, 2.0]), Err(ModelError::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_parameters() {
        assert!(KernelSpec::Polynomial { tau: 1.0, degree: 0 }.validate().is_err());
        assert!(KernelSpec::Rbf { sigma: 0.0 }.validate().is_err());
        assert!(KernelSpec::GaussianLaplace { gamma: -1.0 }.validate().is_err());
        assert!(KernelSpec::GaussianLaplace { gamma: 0.5 }.validate().is_ok());
    }

    #[test]
    fn median_distance() {
        let rows = vec![vec![0.0], vec![1.0], vec![3.0]];
        // distances 1, 3, 2
        assert_eq!(median_pairwise_distance(&rows), 2.0);
        let rows = vec![vec![0.0], vec![1.0], vec![3.0], vec![6.0]];
        // distances 1, 3, 6, 2, 5, 3 -> squared median between 9 and 9
        assert_eq!(median_pairwise_distance(&rows), 3.0);
    }
}
