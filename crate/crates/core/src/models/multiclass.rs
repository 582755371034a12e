use rayon::prelude::*;

use super::kernel::KernelSpec;
use super::svm::{train_binary, BinarySvm, SvmParams};
use super::{ModelError, Result};

/// Binary machine for one unordered class pair; `positive < negative`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMachine {
    pub positive: usize,
    pub negative: usize,
    pub svm: BinarySvm,
}

/// One-vs-one multiclass SVM.
///
/// Prediction is by majority vote over the pairwise machines. Vote ties go to
/// the tied class with the largest summed `|decision|` over the machines it
/// won, then to the lowest class index.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassSvm {
    classes: Vec<usize>,
    machines: Vec<PairMachine>,
}

pub const TIE_RULE: &str = "votes-then-margin-then-lowest";

impl MulticlassSvm {
    pub fn from_parts(classes: Vec<usize>, machines: Vec<PairMachine>) -> Result<Self> {
        let l = classes.len();
        if l < 2 || classes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::Corrupt("class list must be strictly increasing with at least two entries".into()));
        }
        if machines.len() != l * (l - 1) / 2 {
            return Err(ModelError::Corrupt(format!("expected {} machines, found {}", l * (l - 1) / 2, machines.len())));
        }
        let mut k = 0;
        for a in 0..l {
            for b in a + 1..l {
                let m = &machines[k];
                if m.positive != classes[a] || m.negative != classes[b] {
                    return Err(ModelError::Corrupt(format!("machine {k} has pair ({}, {})", m.positive, m.negative)));
                }
                k += 1;
            }
        }
        Ok(Self { classes, machines })
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn machines(&self) -> &[PairMachine] {
        &self.machines
    }

    pub fn dim(&self) -> usize {
        self.machines[0].svm.dim()
    }

    pub fn kernel(&self) -> KernelSpec {
        self.machines[0].svm.kernel()
    }

    /// Decision value of every pairwise machine, in machine order.
    pub fn decisions(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(ModelError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.machines.iter().map(|m| m.svm.decision_unchecked(x)).collect())
    }

    /// Class chosen by the voting rule from precomputed decision values.
    pub fn predict_from_decisions(&self, decisions: &[f64]) -> usize {
        let l = self.classes.len();
        let mut votes = vec![0usize; l];
        let mut margin = vec![0.0; l];
        for (m, &d) in self.machines.iter().zip(decisions) {
            let winner = if d >= 0.0 { m.positive } else { m.negative };
            let w = self.position(winner);
            votes[w] += 1;
            margin[w] += d.abs();
        }
        let mut best = 0;
        for c in 1..l {
            if votes[c] > votes[best] || (votes[c] == votes[best] && margin[c] > margin[best]) {
                best = c;
            }
        }
        self.classes[best]
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(self.predict_from_decisions(&self.decisions(x)?))
    }

    /// Per-class ranking scores of width `n_classes`: votes plus a squashed
    /// confidence `s / (3(|s| + 1))`, where `s` sums the signed decisions in
    /// favour of the class. Classes without a machine score `-inf`.
    pub fn class_scores(&self, x: &[f64], n_classes: usize) -> Result<Vec<f64>> {
        let decisions = self.decisions(x)?;
        let l = self.classes.len();
        let mut votes = vec![0.0; l];
        let mut conf = vec![0.0; l];
        for (m, &d) in self.machines.iter().zip(&decisions) {
            let (p, q) = (self.position(m.positive), self.position(m.negative));
            if d >= 0.0 {
                votes[p] += 1.0;
            } else {
                votes[q] += 1.0;
            }
            conf[p] += d;
            conf[q] -= d;
        }
        let mut out = vec![f64::NEG_INFINITY; n_classes.max(self.classes.last().map_or(0, |c| c + 1))];
        for (pos, &class) in self.classes.iter().enumerate() {
            out[class] = votes[pos] + conf[pos] / (3.0 * (conf[pos].abs() + 1.0));
        }
        out.truncate(n_classes);
        Ok(out)
    }

    fn position(&self, class: usize) -> usize {
        self.classes.binary_search(&class).expect("machine class is in the class list")
    }
}

/// Trains `C(L, 2)` pairwise machines, one per pair of `label_set` entries.
/// Every entry must have at least one row and every label must be in the set.
pub fn train_multiclass(
    x: &[Vec<f64>],
    y: &[usize],
    label_set: &[usize],
    kernel: KernelSpec,
    params: SvmParams,
) -> Result<MulticlassSvm> {
    if x.len() != y.len() {
        return Err(ModelError::LengthMismatch(x.len(), y.len()));
    }
    let mut classes = label_set.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(ModelError::SingleClass);
    }
    if let Some(&bad) = y.iter().find(|l| classes.binary_search(l).is_err()) {
        return Err(ModelError::BadLabel(format!("label {bad} is not in the label set")));
    }
    if let Some(&empty) = classes.iter().find(|c| !y.contains(c)) {
        return Err(ModelError::EmptyClass(empty));
    }
    let mut pairs = Vec::new();
    for a in 0..classes.len() {
        for b in a + 1..classes.len() {
            pairs.push((classes[a], classes[b]));
        }
    }
    let machines = pairs
        .par_iter()
        .map(|&(p, q)| {
            let mut rows = Vec::new();
            let mut t = Vec::new();
            for (row, &label) in x.iter().zip(y) {
                if label == p {
                    rows.push(row.clone());
                    t.push(1i8);
                } else if label == q {
                    rows.push(row.clone());
                    t.push(-1i8);
                }
            }
            train_binary(&rows, &t, kernel, params).map(|svm| PairMachine {
                positive: p,
                negative: q,
                svm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MulticlassSvm { classes, machines })
}
