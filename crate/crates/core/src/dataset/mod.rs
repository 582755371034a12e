//! Labeled feature tables: four structural descriptors plus the fourteen
//! intensity measures of each building/record pair, with the interstory drift
//! (MIDR) and its damage class.

mod io;
mod synthetic;

pub use io::{read_table, read_table_str, write_table, write_table_string};
pub use synthetic::{generate_synthetic, ClassMix};

use std::fmt;
use std::str::FromStr;

use crate::signal::IntensityMeasures;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("MIDR must be finite and nonnegative, got {0}")]
    BadMidr(f64),
    #[error("unknown damage class {0:?}")]
    UnknownClass(String),
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("duplicate column {0:?}")]
    DuplicateColumn(String),
    #[error("missing value at row {row}, column {column:?}")]
    MissingValue { row: usize, column: String },
    #[error("non-numeric value {value:?} at row {row}, column {column:?}")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: {message}")]
    InvalidRow { row: usize, message: String },
    #[error("row {row}: stored class {stored} disagrees with class {derived} derived from MIDR")]
    LabelMismatch {
        row: usize,
        stored: DamageClass,
        derived: DamageClass,
    },
    #[error("rows disagree on which of MIDR/CLASS are present")]
    InconsistentOptionals,
    #[error("invalid class mix: {0}")]
    BadClassMix(String),
    #[error("synthetic tables need at least 30 rows, got {0}")]
    TooFewRows(usize),
    #[error("table io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, DatasetError>;

/// Damage state ordered by severity: slight, moderate, heavy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DamageClass {
    Class0,
    Class1,
    Class2,
}

impl DamageClass {
    pub const ALL: [DamageClass; 3] = [DamageClass::Class0, DamageClass::Class1, DamageClass::Class2];
    pub const COUNT: usize = 3;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for DamageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Class{}", self.index())
    }
}

impl FromStr for DamageClass {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix("Class").unwrap_or(t);
        digits
            .parse::<usize>()
            .ok()
            .and_then(Self::from_index)
            .ok_or_else(|| DatasetError::UnknownClass(s.to_string()))
    }
}

/// MIDR below this (percent) is slight damage.
pub const MODERATE_DRIFT: f64 = 0.50;
/// MIDR above this (percent) is heavy damage.
pub const HEAVY_DRIFT: f64 = 1.00;

/// Damage class of a maximum interstory drift ratio given in percent.
/// Both 0.50 and 1.00 belong to `Class1`.
pub fn classify_damage(midr: f64) -> Result<DamageClass> {
    if !(midr.is_finite() && midr >= 0.0) {
        return Err(DatasetError::BadMidr(midr));
    }
    Ok(if midr < MODERATE_DRIFT {
        DamageClass::Class0
    } else if midr <= HEAVY_DRIFT {
        DamageClass::Class1
    } else {
        DamageClass::Class2
    })
}

/// The eighteen input features in canonical column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    HTot,
    NVx,
    NVy,
    E0,
    Pga,
    Pgv,
    Pgd,
    Arias,
    Sed,
    Cav,
    Asi,
    Hi,
    Epa,
    PgvPga,
    Pp,
    Tud,
    Tbd,
    Tsd,
}

impl Feature {
    pub const COUNT: usize = 18;
    pub const ALL: [Feature; 18] = [
        Feature::HTot,
        Feature::NVx,
        Feature::NVy,
        Feature::E0,
        Feature::Pga,
        Feature::Pgv,
        Feature::Pgd,
        Feature::Arias,
        Feature::Sed,
        Feature::Cav,
        Feature::Asi,
        Feature::Hi,
        Feature::Epa,
        Feature::PgvPga,
        Feature::Pp,
        Feature::Tud,
        Feature::Tbd,
        Feature::Tsd,
    ];

    pub fn name(self) -> &'static str {
        FEATURE_NAMES[self as usize]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_name(name: &str) -> Option<Self> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| Self::ALL[i])
    }
}

pub const FEATURE_NAMES: [&str; 18] = [
    "Htot", "nvx", "nvy", "e0", "PGA", "PGV", "PGD", "Ia", "SED", "CAV", "ASI", "HI", "EPA",
    "PGV_PGA", "PP", "TUD", "TBD", "TSD",
];
pub const MIDR_COLUMN: &str = "MIDR";
pub const CLASS_COLUMN: &str = "CLASS";

/// Building descriptors entering the feature vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralFeatures {
    /// Total height, m.
    pub h_tot: f64,
    /// Fraction of base shear taken by walls along x.
    pub n_vx: f64,
    /// Fraction of base shear taken by walls along y.
    pub n_vy: f64,
    /// Structural eccentricity, m.
    pub e_0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    values: [f64; Feature::COUNT],
    midr: Option<f64>,
    label: Option<DamageClass>,
}

impl FeatureRow {
    pub fn new(structural: StructuralFeatures, ims: &IntensityMeasures) -> Self {
        let mut values = [0.0; Feature::COUNT];
        values[..4].copy_from_slice(&[structural.h_tot, structural.n_vx, structural.n_vy, structural.e_0]);
        values[4..].copy_from_slice(&ims.to_array());
        Self {
            values,
            midr: None,
            label: None,
        }
    }

    pub fn from_values(values: [f64; Feature::COUNT]) -> Self {
        Self {
            values,
            midr: None,
            label: None,
        }
    }

    /// Attaches a drift value and the class derived from it.
    pub fn with_midr(mut self, midr: f64) -> Result<Self> {
        self.label = Some(classify_damage(midr)?);
        self.midr = Some(midr);
        Ok(self)
    }

    pub fn with_label(mut self, label: DamageClass) -> Self {
        self.label = Some(label);
        self
    }

    pub fn values(&self) -> &[f64; Feature::COUNT] {
        &self.values
    }

    pub fn get(&self, f: Feature) -> f64 {
        self.values[f.index()]
    }

    pub fn structural(&self) -> StructuralFeatures {
        StructuralFeatures {
            h_tot: self.values[0],
            n_vx: self.values[1],
            n_vy: self.values[2],
            e_0: self.values[3],
        }
    }

    pub fn intensity_measures(&self) -> IntensityMeasures {
        let mut ims = [0.0; IntensityMeasures::COUNT];
        ims.copy_from_slice(&self.values[4..]);
        IntensityMeasures::from_array(ims)
    }

    pub fn midr(&self) -> Option<f64> {
        self.midr
    }

    pub fn label(&self) -> Option<DamageClass> {
        self.label
    }

    fn validate(&self, row: usize) -> Result<()> {
        let bad = |message: String| Err(DatasetError::InvalidRow { row, message });
        if let Some(i) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::MissingValue {
                row,
                column: FEATURE_NAMES[i].to_string(),
            });
        }
        let s = self.structural();
        if s.h_tot <= 0.0 {
            return bad(format!("Htot must be positive, got {}", s.h_tot));
        }
        for (name, v) in [("nvx", s.n_vx), ("nvy", s.n_vy)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if s.e_0 < 0.0 {
            return bad(format!("e0 must be nonnegative, got {}", s.e_0));
        }
        if let Some(i) = self.values[4..].iter().position(|v| *v < 0.0) {
            return bad(format!("{} must be nonnegative", FEATURE_NAMES[4 + i]));
        }
        if let Some(midr) = self.midr {
            let derived = classify_damage(midr).map_err(|_| DatasetError::InvalidRow {
                row,
                message: format!("MIDR must be finite and nonnegative, got {midr}"),
            })?;
            if let Some(stored) = self.label {
                if stored != derived {
                    return Err(DatasetError::LabelMismatch { row, stored, derived });
                }
            }
        }
        Ok(())
    }
}

/// Validated, immutable collection of rows sharing the same optional columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    tag: String,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn new(tag: impl Into<String>, rows: Vec<FeatureRow>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let shape = (first.midr.is_some(), first.label.is_some());
            if rows.iter().any(|r| (r.midr.is_some(), r.label.is_some()) != shape) {
                return Err(DatasetError::InconsistentOptionals);
            }
        }
        for (i, r) in rows.iter().enumerate() {
            r.validate(i + 1)?;
        }
        Ok(Self {
            tag: tag.into(),
            rows,
        })
    }

    /// Dataset tag such as `ROW_FORM_BARE` or `synthetic`.
    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_names(&self) -> &'static [&'static str] {
        &FEATURE_NAMES
    }

    pub fn has_midr(&self) -> bool {
        self.rows.first().is_some_and(|r| r.midr.is_some())
    }

    pub fn has_labels(&self) -> bool {
        self.rows.first().is_some_and(|r| r.label.is_some())
    }

    /// Row-major feature matrix.
    pub fn feature_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.values.to_vec()).collect()
    }

    /// Class labels, or `None` when the table is unlabeled.
    pub fn labels(&self) -> Option<Vec<DamageClass>> {
        self.rows.iter().map(|r| r.label).collect()
    }

    pub fn midrs(&self) -> Option<Vec<f64>> {
        self.rows.iter().map(|r| r.midr).collect()
    }

    /// Per-class row counts.
    pub fn class_counts(&self) -> [usize; DamageClass::COUNT] {
        let mut counts = [0; DamageClass::COUNT];
        for r in &self.rows {
            if let Some(c) = r.label {
                counts[c.index()] += 1;
            }
        }
        counts
    }

    /// Same rows with labels replaced (used for permutation tests).
    pub fn with_labels(&self, labels: &[DamageClass]) -> Self {
        let rows = self
            .rows
            .iter()
            .zip(labels)
            .map(|(r, &l)| FeatureRow {
                values: r.values,
                midr: None,
                label: Some(l),
            })
            .collect();
        Self {
            tag: self.tag.clone(),
            rows,
        }
    }
}
