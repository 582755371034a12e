//! Run configuration: a TOML file with one table per concern. Command-line
//! flags override file values.

use std::path::{Path, PathBuf};

use seisclass_core::dataset::ClassMix;
use seisclass_core::eval::CvConfig;
use seisclass_core::models::{ModelSpec, SvmParams, MODEL_NAMES};
use seisclass_core::signal::{AccelUnit, ImConfig, PeriodGrid, RecordFormat};
use seisclass_core::tree::TreeParams;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; 0 lets the runtime decide.
    pub workers: usize,
    pub cv: CvSection,
    pub models: ModelsSection,
    pub im: ImSection,
    pub preprocess: PreprocessSection,
    pub synth: SynthSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            out_dir: PathBuf::from("."),
            workers: 0,
            cv: CvSection::default(),
            models: ModelsSection::default(),
            im: ImSection::default(),
            preprocess: PreprocessSection::default(),
            synth: SynthSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvSection {
    pub folds: usize,
    pub stratify: bool,
    /// Min-max scale features on each training split.
    pub normalize: bool,
    pub range: [f64; 2],
}

impl Default for CvSection {
    fn default() -> Self {
        Self {
            folds: 10,
            stratify: true,
            normalize: true,
            range: [0.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ModelsSection {
    pub list: Vec<String>,
    pub svm_polynomial: PolySection,
    pub svm_rbf: RbfSection,
    pub svm_gaussian: GaussianSection,
    pub knn: KnnSection,
    pub cart: CartSection,
}

impl Default for ModelsSection {
    fn default() -> Self {
        Self {
            list: MODEL_NAMES.iter().map(|s| s.to_string()).collect(),
            svm_polynomial: PolySection::default(),
            svm_rbf: RbfSection::default(),
            svm_gaussian: GaussianSection::default(),
            knn: KnnSection::default(),
            cart: CartSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolySection {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub tau: f64,
    pub degree: u32,
}

impl Default for PolySection {
    fn default() -> Self {
        let p = SvmParams::default();
        Self {
            c: p.c,
            tol: p.tol,
            max_iter: p.max_iter,
            tau: 1.0,
            degree: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RbfSection {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Omitted: derived from the median pairwise distance of the training rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl Default for RbfSection {
    fn default() -> Self {
        let p = SvmParams::default();
        Self {
            c: p.c,
            tol: p.tol,
            max_iter: p.max_iter,
            sigma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaussianSection {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl Default for GaussianSection {
    fn default() -> Self {
        let p = SvmParams::default();
        Self {
            c: p.c,
            tol: p.tol,
            max_iter: p.max_iter,
            gamma: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KnnSection {
    pub k: usize,
}

impl Default for KnnSection {
    fn default() -> Self {
        Self {
            k: seisclass_core::models::DEFAULT_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CartSection {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
}

impl Default for CartSection {
    fn default() -> Self {
        let t = TreeParams::default();
        Self {
            max_depth: t.max_depth,
            min_samples_leaf: t.min_samples_leaf,
            min_samples_split: t.min_samples_split,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImSection {
    /// `two-column` or `npts`.
    pub format: String,
    /// `g` or `mps2`.
    pub unit: String,
    pub damping: f64,
    pub threshold_fraction: f64,
    pub arias_bounds: [f64; 2],
    pub period_start: f64,
    pub period_stop: f64,
    pub period_step: f64,
    pub detrend: bool,
}

impl Default for ImSection {
    fn default() -> Self {
        let d = ImConfig::default();
        Self {
            format: "two-column".into(),
            unit: "mps2".into(),
            damping: d.damping,
            threshold_fraction: d.threshold_fraction,
            arias_bounds: [d.arias_bounds.0, d.arias_bounds.1],
            period_start: 0.02,
            period_stop: 4.0,
            period_step: 0.02,
            detrend: d.detrend,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessSection {
    pub range: [f64; 2],
    /// Fit PCA on the normalized features instead of the raw ones.
    pub pca_normalized: bool,
    pub pps_folds: usize,
    /// Also write `normalized.csv`, the table with scaled features.
    pub write_normalized: bool,
}

impl Default for PreprocessSection {
    fn default() -> Self {
        Self {
            range: [0.0, 1.0],
            pca_normalized: true,
            pps_folds: 4,
            write_normalized: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub n: usize,
    /// Class proportions, slight/moderate/heavy.
    pub mix: [f64; 3],
}

impl Default for SynthSection {
    fn default() -> Self {
        Self {
            n: 1500,
            mix: ClassMix::uniform().proportions(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn cv_config(&self) -> Result<CvConfig> {
        if self.cv.folds < 2 {
            return Err(CliError::Config(format!("folds must be at least 2, got {}", self.cv.folds)));
        }
        Ok(CvConfig {
            folds: self.cv.folds,
            seed: self.seed,
            stratify: self.cv.stratify,
            normalize: self.cv.normalize.then_some((self.cv.range[0], self.cv.range[1])),
            workers: self.workers,
            ..CvConfig::default()
        })
    }

    /// The configured models in list order, with their hyperparameters.
    pub fn model_specs(&self) -> Result<Vec<ModelSpec>> {
        if self.models.list.is_empty() {
            return Err(CliError::Config("no models configured".into()));
        }
        let mut seen = Vec::new();
        let mut specs = Vec::new();
        for name in &self.models.list {
            let spec = self.model_spec(name)?;
            if seen.contains(&spec.name()) {
                return Err(CliError::Config(format!("model {name:?} listed twice")));
            }
            seen.push(spec.name());
            specs.push(spec);
        }
        Ok(specs)
    }

    pub fn model_spec(&self, name: &str) -> Result<ModelSpec> {
        let m = &self.models;
        let spec = match name.parse::<ModelSpec>()? {
            ModelSpec::SvmPolynomial { .. } => ModelSpec::SvmPolynomial {
                tau: m.svm_polynomial.tau,
                degree: m.svm_polynomial.degree,
                params: params(m.svm_polynomial.c, m.svm_polynomial.tol, m.svm_polynomial.max_iter)?,
            },
            ModelSpec::SvmRbf { .. } => ModelSpec::SvmRbf {
                sigma: m.svm_rbf.sigma,
                params: params(m.svm_rbf.c, m.svm_rbf.tol, m.svm_rbf.max_iter)?,
            },
            ModelSpec::SvmGaussian { .. } => ModelSpec::SvmGaussian {
                gamma: m.svm_gaussian.gamma,
                params: params(m.svm_gaussian.c, m.svm_gaussian.tol, m.svm_gaussian.max_iter)?,
            },
            ModelSpec::Knn { .. } => ModelSpec::Knn { k: m.knn.k },
            ModelSpec::Cart(_) => ModelSpec::Cart(TreeParams {
                max_depth: m.cart.max_depth,
                min_samples_leaf: m.cart.min_samples_leaf,
                min_samples_split: m.cart.min_samples_split,
            }),
            other => other,
        };
        Ok(spec)
    }

    pub fn im_config(&self) -> Result<ImConfig> {
        let im = &self.im;
        let periods = PeriodGrid::uniform(im.period_start, im.period_stop, im.period_step)
            .map_err(|e| CliError::Config(format!("period grid: {e}")))?;
        let cfg = ImConfig {
            damping: im.damping,
            threshold_fraction: im.threshold_fraction,
            arias_bounds: (im.arias_bounds[0], im.arias_bounds[1]),
            periods,
            detrend: im.detrend,
        };
        cfg.validate().map_err(|e| CliError::Config(format!("im: {e}")))?;
        Ok(cfg)
    }

    pub fn record_format(&self) -> Result<(RecordFormat, AccelUnit)> {
        let format = self.im.format.parse::<RecordFormat>().map_err(CliError::Config)?;
        let unit = self.im.unit.parse::<AccelUnit>().map_err(CliError::Config)?;
        Ok((format, unit))
    }
}

fn params(c: f64, tol: f64, max_iter: usize) -> Result<SvmParams> {
    let p = SvmParams { c, tol, max_iter };
    p.validate()?;
    Ok(p)
}
