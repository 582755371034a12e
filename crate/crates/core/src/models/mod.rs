//! Soft-margin kernel SVM solved by SMO, one-vs-one multiclass voting, and the
//! baseline classifiers used for model comparison.

mod baseline;
mod kernel;
mod multiclass;
mod serialize;
mod svm;

use std::fmt;
use std::str::FromStr;

pub use baseline::{Cart, GaussianNb, Knn, Lda, Qda, DEFAULT_K, VARIANCE_FLOOR};
pub use kernel::{median_pairwise_distance, KernelSpec};
pub use multiclass::{train_multiclass, MulticlassSvm, PairMachine, TIE_RULE};
pub use serialize::{read_model, write_model, SavedModel, FORMAT_VERSION};
pub use svm::{train_binary, BinarySvm, SvmParams};

use crate::tree::TreeParams;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("no training rows")]
    Empty,
    #[error("length mismatch: {0} rows vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("training labels contain a single class")]
    SingleClass,
    #[error("class {0} has no training rows")]
    EmptyClass(usize),
    #[error("invalid label: {0}")]
    BadLabel(String),
    #[error("invalid kernel: {0}")]
    BadKernel(String),
    #[error("invalid hyperparameter: {0}")]
    BadHyperparameter(String),
    #[error("SMO did not converge after {iterations} iterations (KKT violation {violation:e})")]
    NotConverged { iterations: usize, violation: f64 },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("malformed model file: {0}")]
    Corrupt(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// Configured classifier, before training. Kernel widths left as `None` are
/// resolved from the training rows: `sigma = d_med / √2`, `gamma = 1 / d_med`,
/// with `d_med` the median pairwise Euclidean distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    SvmPolynomial { tau: f64, degree: u32, params: SvmParams },
    SvmRbf { sigma: Option<f64>, params: SvmParams },
    SvmGaussian { gamma: Option<f64>, params: SvmParams },
    Knn { k: usize },
    GaussianNb,
    Cart(TreeParams),
    Lda,
    Qda,
}

/// Model names in default comparison order.
pub const MODEL_NAMES: [&str; 8] = [
    "svm-polynomial",
    "svm-rbf",
    "svm-gaussian",
    "knn",
    "gaussian-nb",
    "cart",
    "lda",
    "qda",
];

impl ModelSpec {
    /// All models with default hyperparameters.
    pub fn defaults() -> Vec<ModelSpec> {
        MODEL_NAMES.iter().map(|n| n.parse().expect("built-in name")).collect()
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::SvmPolynomial { .. } => "svm-polynomial",
            ModelSpec::SvmRbf { .. } => "svm-rbf",
            ModelSpec::SvmGaussian { .. } => "svm-gaussian",
            ModelSpec::Knn { .. } => "knn",
            ModelSpec::GaussianNb => "gaussian-nb",
            ModelSpec::Cart(_) => "cart",
            ModelSpec::Lda => "lda",
            ModelSpec::Qda => "qda",
        }
    }

    /// Human-readable name used in reports.
    pub fn display_name(&self) -> &'static str {
        match self {
            ModelSpec::SvmPolynomial { .. } => "SVM - Polynomial Kernel",
            ModelSpec::SvmRbf { .. } => "SVM - RBF Kernel",
            ModelSpec::SvmGaussian { .. } => "SVM - Gaussian Kernel",
            ModelSpec::Knn { .. } => "K Neighbors Classifier",
            ModelSpec::GaussianNb => "Naive Bayes",
            ModelSpec::Cart(_) => "Decision Tree Classifier",
            ModelSpec::Lda => "Linear Discriminant Analysis",
            ModelSpec::Qda => "Quadratic Discriminant Analysis",
        }
    }

    /// Short report identifier.
    pub fn id(&self) -> &'static str {
        match self {
            ModelSpec::SvmPolynomial { .. } => "svm_poly",
            ModelSpec::SvmRbf { .. } => "svm_rbf",
            ModelSpec::SvmGaussian { .. } => "svm_gauss",
            ModelSpec::Knn { .. } => "knn",
            ModelSpec::GaussianNb => "nb",
            ModelSpec::Cart(_) => "dt",
            ModelSpec::Lda => "lda",
            ModelSpec::Qda => "qda",
        }
    }

    pub fn svm_params(&self) -> Option<SvmParams> {
        match *self {
            ModelSpec::SvmPolynomial { params, .. } | ModelSpec::SvmRbf { params, .. } | ModelSpec::SvmGaussian { params, .. } => {
                Some(params)
            }
            _ => None,
        }
    }

    /// Kernel for SVM specs, with automatic widths resolved on `x`.
    pub fn resolve_kernel(&self, x: &[Vec<f64>]) -> Option<KernelSpec> {
        let median = || {
            let d = median_pairwise_distance(x);
            if d > 0.0 {
                d
            } else {
                1.0
            }
        };
        match *self {
            ModelSpec::SvmPolynomial { tau, degree, .. } => Some(KernelSpec::Polynomial { tau, degree }),
            ModelSpec::SvmRbf { sigma, .. } => Some(KernelSpec::Rbf {
                sigma: sigma.unwrap_or_else(|| median() / std::f64::consts::SQRT_2),
            }),
            ModelSpec::SvmGaussian { gamma, .. } => Some(KernelSpec::GaussianLaplace {
                gamma: gamma.unwrap_or_else(|| 1.0 / median()),
            }),
            _ => None,
        }
    }

    /// Trains on rows `x` with class indices `y < n_classes`.
    pub fn fit(&self, x: &[Vec<f64>], y: &[usize], n_classes: usize) -> Result<FittedModel> {
        if x.len() != y.len() {
            return Err(ModelError::LengthMismatch(x.len(), y.len()));
        }
        if x.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut notes = Vec::new();
        let kind = match *self {
            ModelSpec::SvmPolynomial { params, .. } | ModelSpec::SvmRbf { params, .. } | ModelSpec::SvmGaussian { params, .. } => {
                let kernel = self.resolve_kernel(x).expect("svm spec has a kernel");
                let mut present: Vec<usize> = y.to_vec();
                present.sort_unstable();
                present.dedup();
                if let Some(&bad) = present.iter().find(|&&c| c >= n_classes) {
                    return Err(ModelError::BadLabel(format!("label {bad} with {n_classes} classes")));
                }
                Fitted::Svm(train_multiclass(x, y, &present, kernel, params)?)
            }
            ModelSpec::Knn { k } => Fitted::Knn(Knn::fit(x, y, n_classes, k)?),
            ModelSpec::GaussianNb => Fitted::Nb(GaussianNb::fit(x, y, n_classes)?),
            ModelSpec::Cart(p) => Fitted::Cart(Cart::fit(x, y, n_classes, p)?),
            ModelSpec::Lda => {
                let m = Lda::fit(x, y, n_classes)?;
                if m.regularized() {
                    notes.push("lda: singular pooled covariance regularized".to_string());
                }
                Fitted::Lda(m)
            }
            ModelSpec::Qda => {
                let m = Qda::fit(x, y, n_classes)?;
                for (c, _) in m.regularized().iter().enumerate().filter(|(_, r)| **r) {
                    notes.push(format!("qda: singular covariance of class {c} regularized"));
                }
                Fitted::Qda(m)
            }
        };
        Ok(FittedModel { kind, n_classes, notes })
    }
}

impl FromStr for ModelSpec {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        let params = SvmParams::default();
        Ok(match s.trim() {
            "svm-polynomial" => ModelSpec::SvmPolynomial { tau: 1.0, degree: 3, params },
            "svm-rbf" => ModelSpec::SvmRbf { sigma: None, params },
            "svm-gaussian" => ModelSpec::SvmGaussian { gamma: None, params },
            "knn" => ModelSpec::Knn { k: DEFAULT_K },
            "gaussian-nb" => ModelSpec::GaussianNb,
            "cart" => ModelSpec::Cart(TreeParams::default()),
            "lda" => ModelSpec::Lda,
            "qda" => ModelSpec::Qda,
            other => return Err(ModelError::UnknownModel(other.to_string())),
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Fitted {
    Svm(MulticlassSvm),
    Knn(Knn),
    Nb(GaussianNb),
    Cart(Cart),
    Lda(Lda),
    Qda(Qda),
}

/// A trained classifier of any supported kind.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    kind: Fitted,
    n_classes: usize,
    notes: Vec<String>,
}

impl FittedModel {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Warnings raised during training (e.g. covariance regularization).
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn as_svm(&self) -> Option<&MulticlassSvm> {
        match &self.kind {
            Fitted::Svm(m) => Some(m),
            _ => None,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match &self.kind {
            Fitted::Svm(m) => m.predict(x),
            Fitted::Knn(m) => m.predict(x),
            Fitted::Nb(m) => m.predict(x),
            Fitted::Cart(m) => m.predict(x),
            Fitted::Lda(m) => m.predict(x),
            Fitted::Qda(m) => m.predict(x),
        }
    }

    /// Per-class ranking scores of width `n_classes`, or `None` for models
    /// that produce none.
    pub fn scores(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        Ok(Some(match &self.kind {
            Fitted::Svm(m) => m.class_scores(x, self.n_classes)?,
            Fitted::Knn(m) => m.scores(x)?,
            Fitted::Nb(m) => m.scores(x)?,
            Fitted::Cart(m) => m.scores(x)?,
            Fitted::Lda(m) => m.scores(x)?,
            Fitted::Qda(m) => m.scores(x)?,
        }))
    }
}
