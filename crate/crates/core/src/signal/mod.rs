//! Accelerogram ingestion, time integration, elastic response spectra and the
//! ground-motion intensity measures used as seismic features.
//!
//! All quantities are SI internally: acceleration in m/s², velocity in m/s,
//! displacement in m, time and period in seconds. Records given in units of g
//! are converted once at load time with [`STANDARD_GRAVITY`].

mod io;
mod measures;
mod spectrum;

pub use io::{load_accelerogram, parse_accelerogram, RecordFormat};
pub use measures::{compute_intensity_measures, ImConfig, IntensityMeasures};
pub use spectrum::{compute_response_spectrum, PeriodGrid, ResponseSpectrum};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Gravitational acceleration used for unit conversion and Arias intensity.
pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, thiserror::Error)]
pub enum SignalError {
    #[error("cannot read record {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: non-numeric token {token:?}")]
    NonNumeric { line: usize, token: String },
    #[error("line {line}: expected two columns (time, acceleration)")]
    BadColumns { line: usize },
    #[error("non-uniform time step at line {line}: step {step} differs from dt {dt}")]
    NonUniformStep { line: usize, step: f64, dt: f64 },
    #[error("missing or malformed NPTS/DT header")]
    BadHeader,
    #[error("header declares {declared} samples but {found} were read")]
    CountMismatch { declared: usize, found: usize },
    #[error("record needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("sample {index} is not finite")]
    NonFinite { index: usize },
    #[error("invalid damping ratio {0}: must lie in (0, 1)")]
    BadDamping(f64),
    #[error("period grid is empty")]
    EmptyGrid,
    #[error("period {0} must be positive (and at least 0.02 s)")]
    BadPeriod(f64),
    #[error("period grid must be strictly increasing")]
    UnsortedGrid,
    #[error("period grid [{min}, {max}] does not cover the band [{lo}, {hi}]")]
    GridTooNarrow { min: f64, max: f64, lo: f64, hi: f64 },
    #[error("invalid intensity-measure configuration: {0}")]
    BadConfig(String),
    /// PGA is zero, so PGV/PGA and every PGA-relative duration are undefined.
    /// The durations in `measures` are set to 0 and the ratio to 0.
    #[error("record {id} has zero peak acceleration; PGV/PGA is undefined")]
    UndefinedRatio {
        id: String,
        measures: Box<IntensityMeasures>,
    },
}

pub type Result<T> = std::result::Result<T, SignalError>;

/// Unit of the acceleration values stored in a record file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccelUnit {
    G,
    #[default]
    MetersPerSecondSquared,
}

impl AccelUnit {
    pub fn to_si_factor(self) -> f64 {
        match self {
            AccelUnit::G => STANDARD_GRAVITY,
            AccelUnit::MetersPerSecondSquared => 1.0,
        }
    }
}

impl FromStr for AccelUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g" => Ok(AccelUnit::G),
            "mps2" | "m/s2" | "m/s^2" => Ok(AccelUnit::MetersPerSecondSquared),
            other => Err(format!("unknown acceleration unit {other:?} (expected g or mps2)")),
        }
    }
}

impl fmt::Display for AccelUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AccelUnit::G => f.write_str("g"),
            AccelUnit::MetersPerSecondSquared => f.write_str("mps2"),
        }
    }
}

/// A uniformly sampled sequence with a fixed time step.
pub trait Sampled {
    fn dt(&self) -> f64;
    fn samples(&self) -> &[f64];

    fn len(&self) -> usize {
        self.samples().len()
    }

    fn is_empty(&self) -> bool {
        self.samples().is_empty()
    }

    /// Time spanned from the first to the last sample.
    fn duration(&self) -> f64 {
        self.dt() * (self.len().saturating_sub(1)) as f64
    }

    /// Largest absolute sample value.
    fn peak_abs(&self) -> f64 {
        self.samples().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Ground-acceleration time history in m/s².
#[derive(Debug, Clone, PartialEq)]
pub struct Accelerogram {
    id: String,
    dt: f64,
    samples: Vec<f64>,
    source_unit: AccelUnit,
}

impl Accelerogram {
    /// Builds a record from SI samples.
    pub fn new(id: impl Into<String>, dt: f64, samples: Vec<f64>) -> Result<Self> {
        Self::from_unit(id, dt, samples, AccelUnit::MetersPerSecondSquared)
    }

    /// Builds a record from samples in `unit`, converting to m/s².
    pub fn from_unit(
        id: impl Into<String>,
        dt: f64,
        mut samples: Vec<f64>,
        unit: AccelUnit,
    ) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(SignalError::BadTimeStep(dt));
        }
        if samples.len() < 2 {
            return Err(SignalError::TooFewSamples(samples.len()));
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite { index });
        }
        let factor = unit.to_si_factor();
        if factor != 1.0 {
            samples.iter_mut().for_each(|v| *v *= factor);
        }
        Ok(Self {
            id: id.into(),
            dt,
            samples,
            source_unit: unit,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Unit the record was stored in before conversion.
    pub fn source_unit(&self) -> AccelUnit {
        self.source_unit
    }

    /// Returns a copy scaled by `factor` (used for amplitude scaling studies).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// Returns a copy with the least-squares straight line removed.
    pub fn detrended(&self) -> Self {
        let n = self.samples.len() as f64;
        let t_mean = (n - 1.0) / 2.0;
        let a_mean = self.samples.iter().sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for (i, a) in self.samples.iter().enumerate() {
            let dt = i as f64 - t_mean;
            sxy += dt * (a - a_mean);
            sxx += dt * dt;
        }
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, a)| a - a_mean - slope * (i as f64 - t_mean))
            .collect();
        Self {
            samples,
            ..self.clone()
        }
    }

    pub fn velocity(&self) -> TimeSeries {
        integrate_series(self)
    }

    pub fn displacement(&self) -> TimeSeries {
        integrate_series(&integrate_series(self))
    }
}

impl Sampled for Accelerogram {
    fn dt(&self) -> f64 {
        self.dt
    }

    fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Velocity (m/s) or displacement (m) history sharing the source record's step.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub dt: f64,
    pub samples: Vec<f64>,
}

impl Sampled for TimeSeries {
    fn dt(&self) -> f64 {
        self.dt
    }

    fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Cumulative trapezoidal integral, starting from zero.
pub fn integrate_series<S: Sampled + ?Sized>(x: &S) -> TimeSeries {
    let dt = x.dt();
    let half = 0.5 * dt;
    let samples = x.samples();
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    if let Some(&first) = samples.first() {
        out.push(0.0);
        let mut prev = first;
        for &v in &samples[1..] {
            acc += half * (prev + v);
            out.push(acc);
            prev = v;
        }
    }
    TimeSeries { dt, samples: out }
}

/// Trapezoidal integral of uniformly spaced values.
pub(crate) fn trapezoid(dt: f64, values: impl IntoIterator<Item = f64>) -> f64 {
    let mut iter = values.into_iter();
    let Some(mut prev) = iter.next() else {
        return 0.0;
    };
    let mut sum = 0.0;
    for v in iter {
        sum += prev + v;
        prev = v;
    }
    0.5 * dt * sum
}
