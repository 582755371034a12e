use super::{Frame, PreprocessError, Result};

/// Per-feature training minima and maxima with the target range.
///
/// `x' = (x - min) / (max - min) * (new_max - new_min) + new_min`. Values
/// outside the training range extrapolate linearly; constant features map to
/// `new_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationModel {
    names: Vec<String>,
    mins: Vec<f64>,
    maxs: Vec<f64>,
    range: (f64, f64),
}

impl NormalizationModel {
    /// Rebuilds a fitted model from stored statistics.
    pub fn from_parts(names: Vec<String>, mins: Vec<f64>, maxs: Vec<f64>, range: (f64, f64)) -> Result<Self> {
        if names.len() != mins.len() || names.len() != maxs.len() {
            return Err(PreprocessError::WidthMismatch {
                expected: names.len(),
                found: mins.len().min(maxs.len()),
            });
        }
        let (lo, hi) = range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(PreprocessError::BadRange(lo, hi));
        }
        Ok(Self { names, mins, maxs, range })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn maxs(&self) -> &[f64] {
        &self.maxs
    }

    pub fn range(&self) -> (f64, f64) {
        self.range
    }

    /// Whether feature `j` had a single value in the training data.
    pub fn is_constant(&self, j: usize) -> bool {
        self.maxs[j] == self.mins[j]
    }

    fn scale(&self, j: usize, x: f64) -> f64 {
        let (lo, hi) = self.range;
        let span = self.maxs[j] - self.mins[j];
        if span == 0.0 {
            lo
        } else {
            (x - self.mins[j]) / span * (hi - lo) + lo
        }
    }

    /// Normalizes a row laid out in the fitted column order.
    pub fn apply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter().enumerate().map(|(j, &x)| self.scale(j, x)).collect()
    }

    pub fn apply_rows(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.apply_row(r)).collect()
    }
}

pub fn fit_minmax(frame: &Frame, range: (f64, f64)) -> Result<NormalizationModel> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(PreprocessError::BadRange(lo, hi));
    }
    if frame.n_rows() == 0 {
        return Err(PreprocessError::Empty);
    }
    let p = frame.n_cols();
    let mut mins = vec![f64::INFINITY; p];
    let mut maxs = vec![f64::NEG_INFINITY; p];
    for row in frame.rows() {
        for (j, &v) in row.iter().enumerate() {
            mins[j] = mins[j].min(v);
            maxs[j] = maxs[j].max(v);
        }
    }
    Ok(NormalizationModel {
        names: frame.names().to_vec(),
        mins,
        maxs,
        range,
    })
}

/// Normalizes `frame`, matching its columns to the fitted ones by name.
pub fn apply_minmax(model: &NormalizationModel, frame: &Frame) -> Result<Frame> {
    let map: Vec<usize> = frame
        .names()
        .iter()
        .map(|n| {
            model
                .names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| PreprocessError::UnknownFeature(n.clone()))
        })
        .collect::<Result<_>>()?;
    let rows = frame
        .rows()
        .iter()
        .map(|r| r.iter().zip(&map).map(|(&x, &j)| model.scale(j, x)).collect())
        .collect();
    Frame::with_kinds(
        frame.names().to_vec(),
        (0..frame.n_cols()).map(|j| frame.is_categorical(j)).collect(),
        rows,
    )
}

/// Stateful wrapper that reports use before fitting.
#[derive(Debug, Clone, Default)]
pub struct MinMaxScaler {
    range: Option<(f64, f64)>,
    model: Option<NormalizationModel>,
}

impl MinMaxScaler {
    pub fn new(range: (f64, f64)) -> Self {
        Self {
            range: Some(range),
            model: None,
        }
    }

    pub fn fit(&mut self, frame: &Frame) -> Result<&NormalizationModel> {
        let model = fit_minmax(frame, self.range.unwrap_or((0.0, 1.0)))?;
        Ok(self.model.insert(model))
    }

    pub fn transform(&self, frame: &Frame) -> Result<Frame> {
        let model = self.model.as_ref().ok_or(PreprocessError::NotFitted)?;
        apply_minmax(model, frame)
    }

    pub fn model(&self) -> Option<&NormalizationModel> {
        self.model.as_ref()
    }
}
