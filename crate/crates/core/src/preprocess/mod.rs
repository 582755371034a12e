//! Feature preprocessing: min-max normalization, interquartile-range outlier
//! flagging, principal component analysis, and predictive power scores.

mod iqr;
mod minmax;
mod pca;
mod pps;

pub use iqr::{iqr_flags, quantile, ColumnOutliers, OutlierReport};
pub use minmax::{apply_minmax, fit_minmax, MinMaxScaler, NormalizationModel};
pub use pca::{fit_pca, project_pca, PcaModel};
pub use pps::{pps_matrix, pps_score, PpsCell, PpsMetric, PpsReport, PPS_TREE_DEPTH};

use crate::dataset::{FeatureTable, CLASS_COLUMN, FEATURE_NAMES, MIDR_COLUMN};

#[derive(Debug, thiserror::Error)]
pub enum PreprocessError {
    #[error("table has no rows")]
    Empty,
    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow { row: usize, found: usize, expected: usize },
    #[error("normalization model used before fitting")]
    NotFitted,
    #[error("column {0:?} was not present when the model was fitted")]
    UnknownFeature(String),
    #[error("invalid target range [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("column {column:?} has {found} values; at least {needed} required")]
    TooFewValues {
        column: String,
        found: usize,
        needed: usize,
    },
    #[error("requested {requested} components but only {available} features exist")]
    TooManyComponents { requested: usize, available: usize },
    #[error("data has zero total variance")]
    ZeroVariance,
    #[error("projection expects {expected} columns, got {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("at least {needed} rows required, got {found}")]
    TooFewRows { needed: usize, found: usize },
    #[error("cross-validation needs at least 2 folds, got {0}")]
    BadFolds(usize),
}

pub type Result<T> = std::result::Result<T, PreprocessError>;

/// Named numeric columns stored row-major. Categorical columns hold class
/// indices as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    names: Vec<String>,
    categorical: Vec<bool>,
    rows: Vec<Vec<f64>>,
}

impl Frame {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let categorical = vec![false; names.len()];
        Self::with_kinds(names, categorical, rows)
    }

    pub fn with_kinds(names: Vec<String>, categorical: Vec<bool>, rows: Vec<Vec<f64>>) -> Result<Self> {
        assert_eq!(names.len(), categorical.len(), "one kind flag per column");
        for (i, r) in rows.iter().enumerate() {
            if r.len() != names.len() {
                return Err(PreprocessError::RaggedRow {
                    row: i + 1,
                    found: r.len(),
                    expected: names.len(),
                });
            }
        }
        Ok(Self {
            names,
            categorical,
            rows,
        })
    }

    /// The eighteen features, followed by `MIDR` and the categorical `CLASS`
    /// column when `with_targets` is set and the table carries them.
    pub fn from_table(table: &FeatureTable, with_targets: bool) -> Self {
        let mut names: Vec<String> = FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
        let mut categorical = vec![false; names.len()];
        let include_midr = with_targets && table.has_midr();
        let include_class = with_targets && table.has_labels();
        if include_midr {
            names.push(MIDR_COLUMN.into());
            categorical.push(false);
        }
        if include_class {
            names.push(CLASS_COLUMN.into());
            categorical.push(true);
        }
        let rows = table
            .rows()
            .iter()
            .map(|r| {
                let mut v = r.values().to_vec();
                if include_midr {
                    v.push(r.midr().unwrap_or(f64::NAN));
                }
                if include_class {
                    v.push(r.label().map_or(f64::NAN, |c| c.index() as f64));
                }
                v
            })
            .collect();
        Self {
            names,
            categorical,
            rows,
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_categorical(&self, col: usize) -> bool {
        self.categorical[col]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[col]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn into_rows(self) -> Vec<Vec<f64>> {
        self.rows
    }
}
