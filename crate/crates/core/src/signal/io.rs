use std::path::Path;
use std::str::FromStr;

use super::{AccelUnit, Accelerogram, Result, SignalError};

/// Supported accelerogram text layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    /// Whitespace-separated `time acceleration` pairs, `#` comments allowed.
    TwoColumn,
    /// A `NPTS=<n>, DT=<dt>` header followed by whitespace-separated values.
    NptsHeader,
}

impl FromStr for RecordFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "two-column" | "two_column" | "columns" => Ok(RecordFormat::TwoColumn),
            "npts" | "npts-header" | "header" => Ok(RecordFormat::NptsHeader),
            other => Err(format!(
                "unknown record format {other:?} (expected two-column or npts)"
            )),
        }
    }
}

/// Reads a record file; the record id is the file stem.
pub fn load_accelerogram(path: &Path, fmt: RecordFormat, unit: AccelUnit) -> Result<Accelerogram> {
    let text = std::fs::read_to_string(path).map_err(|source| SignalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_accelerogram(&text, fmt, unit, id)
}

pub fn parse_accelerogram(
    text: &str,
    fmt: RecordFormat,
    unit: AccelUnit,
    id: impl Into<String>,
) -> Result<Accelerogram> {
    let (dt, samples) = match fmt {
        RecordFormat::TwoColumn => parse_two_column(text)?,
        RecordFormat::NptsHeader => parse_npts(text)?,
    };
    Accelerogram::from_unit(id, dt, samples, unit)
}

fn number(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| SignalError::NonNumeric {
        line,
        token: token.to_string(),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_two_column(text: &str) -> Result<(f64, Vec<f64>)> {
    let mut times = Vec::new();
    let mut lines = Vec::new();
    let mut samples = Vec::new();
    for (lineno, line) in content_lines(text) {
        let mut tokens = line.split_whitespace();
        let (Some(t), Some(a), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(SignalError::BadColumns { line: lineno });
        };
        times.push(number(t, lineno)?);
        samples.push(number(a, lineno)?);
        lines.push(lineno);
    }
    if samples.len() < 2 {
        return Err(SignalError::TooFewSamples(samples.len()));
    }
    let dt = times[1] - times[0];
    if !(dt.is_finite() && dt > 0.0) {
        return Err(SignalError::BadTimeStep(dt));
    }
    let tol = 1e-6 * dt;
    for i in 1..times.len() {
        let step = times[i] - times[i - 1];
        if (step - dt).abs() > tol {
            return Err(SignalError::NonUniformStep {
                line: lines[i],
                step,
                dt,
            });
        }
    }
    Ok((dt, samples))
}

fn parse_npts(text: &str) -> Result<(f64, Vec<f64>)> {
    let mut lines = content_lines(text);
    let (_, header) = lines.next().ok_or(SignalError::BadHeader)?;
    let mut npts = None;
    let mut dt = None;
    for field in header.split([',', ' ', '\t']).filter(|f| !f.is_empty()) {
        let Some((key, value)) = field.split_once('=') else {
            return Err(SignalError::BadHeader);
        };
        match key.trim().to_ascii_uppercase().as_str() {
            "NPTS" => npts = Some(value.trim().parse::<usize>().map_err(|_| SignalError::BadHeader)?),
            "DT" => dt = Some(value.trim().parse::<f64>().map_err(|_| SignalError::BadHeader)?),
            _ => return Err(SignalError::BadHeader),
        }
    }
    let (Some(npts), Some(dt)) = (npts, dt) else {
        return Err(SignalError::BadHeader);
    };
    let mut samples = Vec::with_capacity(npts);
    for (lineno, line) in lines {
        for token in line.split_whitespace() {
            samples.push(number(token, lineno)?);
        }
    }
    if samples.len() != npts {
        return Err(SignalError::CountMismatch {
            declared: npts,
            found: samples.len(),
        });
    }
    Ok((dt, samples))
}
