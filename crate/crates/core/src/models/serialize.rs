//! Line-oriented text format for a trained SVM and its input normalization.
//!
//! ```text
//! seisclass-svm 1
//! kernel rbf <sigma>            | polynomial <tau> <degree> | gaussian <gamma>
//! classes <c0> <c1> ...
//! normalize <lo> <hi>           (optional, followed by one line per feature)
//! feature <name> <min> <max>
//! machine <pos> <neg> <c> <tol> <bias> <dim> <n_sv>
//! sv <alpha> <label> <x_1> ... <x_dim>
//! end
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a written model
//! reproduces it bit for bit.

use std::fmt::Write as _;

use super::kernel::KernelSpec;
use super::multiclass::{MulticlassSvm, PairMachine};
use super::svm::BinarySvm;
use super::{ModelError, Result};
use crate::preprocess::NormalizationModel;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "seisclass-svm";

/// A trained SVM together with the normalization applied to its inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub normalization: Option<NormalizationModel>,
    pub svm: MulticlassSvm,
}

impl SavedModel {
    /// Normalizes `x` (when a normalization is stored) and predicts its class.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        match &self.normalization {
            Some(n) => {
                if x.len() != n.names().len() {
                    return Err(ModelError::DimensionMismatch {
                        expected: n.names().len(),
                        found: x.len(),
                    });
                }
                self.svm.predict(&n.apply_row(x))
            }
            None => self.svm.predict(x),
        }
    }
}

pub fn write_model(model: &SavedModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = match model.svm.kernel() {
        KernelSpec::Polynomial { tau, degree } => writeln!(out, "kernel polynomial {tau:?} {degree}"),
        KernelSpec::Rbf { sigma } => writeln!(out, "kernel rbf {sigma:?}"),
        KernelSpec::GaussianLaplace { gamma } => writeln!(out, "kernel gaussian {gamma:?}"),
    };
    out.push_str("classes");
    for c in model.svm.classes() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    if let Some(n) = &model.normalization {
        let (lo, hi) = n.range();
        let _ = writeln!(out, "normalize {lo:?} {hi:?}");
        for ((name, min), max) in n.names().iter().zip(n.mins()).zip(n.maxs()) {
            let _ = writeln!(out, "feature {name} {min:?} {max:?}");
        }
    }
    for m in model.svm.machines() {
        let s = &m.svm;
        let _ = writeln!(
            out,
            "machine {} {} {:?} {:?} {:?} {} {}",
            m.positive,
            m.negative,
            s.c(),
            s.tol(),
            s.bias(),
            s.dim(),
            s.n_support()
        );
        for ((sv, a), t) in s.support_vectors().iter().zip(s.alphas()).zip(s.labels()) {
            let _ = write!(out, "sv {a:?} {}", *t as i8);
            for v in sv {
                let _ = write!(out, " {v:?}");
            }
            out.push('\n');
        }
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-empty line as (line number, tokens).
    fn next(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((i + 1, tokens));
            }
        }
        Err(ModelError::Corrupt("unexpected end of file".into()))
    }

    fn expect(&mut self, keyword: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, tokens) = self.next()?;
        if tokens[0] != keyword {
            return Err(ModelError::Corrupt(format!("line {line}: expected `{keyword}`, found `{}`", tokens[0])));
        }
        Ok((line, tokens))
    }
}

fn parse<T: std::str::FromStr>(line: usize, token: Option<&&str>) -> Result<T> {
    let token = token.ok_or_else(|| ModelError::Corrupt(format!("line {line}: missing field")))?;
    token
        .parse()
        .map_err(|_| ModelError::Corrupt(format!("line {line}: cannot parse `{token}`")))
}

pub fn read_model(text: &str) -> Result<SavedModel> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (line, header) = lines.expect(MAGIC)?;
    let version: u32 = parse(line, header.get(1))?;
    if version != FORMAT_VERSION {
        return Err(ModelError::Corrupt(format!("unsupported format version {version}")));
    }

    let (line, k) = lines.expect("kernel")?;
    let kernel = match k.get(1).copied() {
        Some("polynomial") => KernelSpec::Polynomial {
            tau: parse(line, k.get(2))?,
            degree: parse(line, k.get(3))?,
        },
        Some("rbf") => KernelSpec::Rbf { sigma: parse(line, k.get(2))? },
        Some("gaussian") => KernelSpec::GaussianLaplace { gamma: parse(line, k.get(2))? },
        other => return Err(ModelError::Corrupt(format!("line {line}: unknown kernel {other:?}"))),
    };
    kernel.validate()?;

    let (line, c) = lines.expect("classes")?;
    let classes = c[1..].iter().map(|t| parse(line, Some(t))).collect::<Result<Vec<usize>>>()?;
    let n_classes = classes.len();

    let (mut line, mut tokens) = lines.next()?;
    let mut normalization = None;
    if tokens[0] == "normalize" {
        let range = (parse(line, tokens.get(1))?, parse(line, tokens.get(2))?);
        let (mut names, mut mins, mut maxs) = (Vec::new(), Vec::new(), Vec::new());
        loop {
            (line, tokens) = lines.next()?;
            if tokens[0] != "feature" {
                break;
            }
            names.push(
                tokens
                    .get(1)
                    .ok_or_else(|| ModelError::Corrupt(format!("line {line}: missing feature name")))?
                    .to_string(),
            );
            mins.push(parse(line, tokens.get(2))?);
            maxs.push(parse(line, tokens.get(3))?);
        }
        normalization = Some(
            NormalizationModel::from_parts(names, mins, maxs, range).map_err(|e| ModelError::Corrupt(e.to_string()))?,
        );
    }

    let mut machines = Vec::new();
    while tokens[0] == "machine" {
        let positive: usize = parse(line, tokens.get(1))?;
        let negative: usize = parse(line, tokens.get(2))?;
        let c: f64 = parse(line, tokens.get(3))?;
        let tol: f64 = parse(line, tokens.get(4))?;
        let bias: f64 = parse(line, tokens.get(5))?;
        let dim: usize = parse(line, tokens.get(6))?;
        let n_sv: usize = parse(line, tokens.get(7))?;
        let (mut support, mut alphas, mut labels) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..n_sv {
            let (l, sv) = lines.expect("sv")?;
            if sv.len() != dim + 3 {
                return Err(ModelError::Corrupt(format!("line {l}: expected {dim} coordinates")));
            }
            alphas.push(parse(l, sv.get(1))?);
            labels.push(f64::from(parse::<i8>(l, sv.get(2))?));
            support.push(sv[3..].iter().map(|t| parse(l, Some(t))).collect::<Result<Vec<f64>>>()?);
        }
        let svm = BinarySvm::from_parts(kernel, c, tol, dim, support, alphas, labels, bias)?;
        machines.push(PairMachine { positive, negative, svm });
        (line, tokens) = lines.next()?;
    }
    if tokens[0] != "end" {
        return Err(ModelError::Corrupt(format!("line {line}: unexpected `{}`", tokens[0])));
    }
    if n_classes < 2 {
        return Err(ModelError::Corrupt("fewer than two classes".into()));
    }
    let svm = MulticlassSvm::from_parts(classes, machines)?;
    if let Some(n) = &normalization {
        if n.names().len() != svm.dim() {
            return Err(ModelError::Corrupt("normalization width differs from model dimension".into()));
        }
    }
    Ok(SavedModel { normalization, svm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{train_multiclass, SvmParams};

    fn trained() -> MulticlassSvm {
        let x: Vec<Vec<f64>> = (0..30).map(|i| vec![(i / 10) as f64 + (i as f64 * 0.913).sin() * 0.3, (i as f64 * 0.1).cos()]).collect();
        let y: Vec<usize> = (0..30).map(|i| i / 10).collect();
        train_multiclass(&x, &y, &[0, 1, 2], KernelSpec::Rbf { sigma: 0.37 }, SvmParams::default()).unwrap()
    }

    #[test]
    fn exact_round_trip() {
        let norm = NormalizationModel::from_parts(vec!["a".into(), "b".into()], vec![0.1, -3.0], vec![2.7, 1.0 / 3.0], (0.0, 1.0)).unwrap();
        let saved = SavedModel {
            normalization: Some(norm),
            svm: trained(),
        };
        let text = write_model(&saved);
        let back = read_model(&text).unwrap();
        assert_eq!(back, saved);
        assert_eq!(write_model(&back), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_model("").is_err());
        assert!(read_model("seisclass-svm 2\n").is_err());
        let text = write_model(&SavedModel {
            normalization: None,
            svm: trained(),
        });
        assert!(read_model(&text.replace("end\n", "")).is_err());
        assert!(read_model(&text.replacen("sv ", "sv x", 1)).is_err());
    }
}
