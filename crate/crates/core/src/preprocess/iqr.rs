use super::{Frame, PreprocessError, Result};

/// Fence multiplier applied to the interquartile range.
pub const FENCE_FACTOR: f64 = 1.5;

/// Quantile of sorted values by linear interpolation at zero-based position
/// `p * (n - 1)`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnOutliers {
    pub name: String,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub lower_fence: f64,
    pub upper_fence: f64,
    /// One flag per row; rows are reported, never dropped.
    pub flags: Vec<bool>,
}

impl ColumnOutliers {
    pub fn flagged(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierReport {
    pub columns: Vec<ColumnOutliers>,
}

pub fn iqr_flags(frame: &Frame) -> Result<OutlierReport> {
    let mut columns = Vec::with_capacity(frame.n_cols());
    for (j, name) in frame.names().iter().enumerate() {
        let values = frame.column(j);
        if values.len() < 4 {
            return Err(PreprocessError::TooFewValues {
                column: name.clone(),
                found: values.len(),
                needed: 4,
            });
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let q1 = quantile(&sorted, 0.25);
        let q3 = quantile(&sorted, 0.75);
        let iqr = q3 - q1;
        let lower_fence = q1 - FENCE_FACTOR * iqr;
        let upper_fence = q3 + FENCE_FACTOR * iqr;
        let flags = values
            .iter()
            .map(|&x| x < lower_fence || x > upper_fence)
            .collect();
        columns.push(ColumnOutliers {
            name: name.clone(),
            q1,
            q3,
            iqr,
            lower_fence,
            upper_fence,
            flags,
        });
    }
    Ok(OutlierReport { columns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn column(values: &[f64]) -> ColumnOutliers {
        let f = Frame::new(vec!["x".into()], values.iter().map(|v| vec![*v]).collect()).unwrap();
        iqr_flags(&f).unwrap().columns.remove(0)
    }

    #[test]
    fn single_far_outlier() {
        let c = column(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 100.0]);
        assert_eq!((c.q1, c.q3, c.iqr), (3.0, 7.0, 4.0));
        assert_eq!((c.lower_fence, c.upper_fence), (-3.0, 13.0));
        assert_eq!(c.flagged(), 1);
        assert!(c.flags[8]);
    }

    #[test]
    fn constant_and_symmetric_columns() {
        assert_eq!(column(&[4.0; 6]).flagged(), 0);
        assert_eq!(column(&[4.0; 6]).iqr, 0.0);
        assert_eq!(column(&[-2.0, -1.0, 0.0, 1.0, 2.0]).flagged(), 0);
    }

    #[test]
    fn too_few_values() {
        let f = Frame::new(vec!["x".into()], vec![vec![1.0]; 3]).unwrap();
        assert!(matches!(iqr_flags(&f), Err(PreprocessError::TooFewValues { found: 3, .. })));
    }

    proptest! {
        #[test]
        fn shift_invariant_and_scale_equivariant(
            values in prop::collection::vec(-100i32..100, 4..40),
            shift in -1000i32..1000,
            scale in 1u32..8,
        ) {
            // integer-valued data keeps the transformed fences exact
            let base: Vec<f64> = values.iter().map(|&v| v as f64).collect();
            let shifted: Vec<f64> = base.iter().map(|v| v + shift as f64).collect();
            let scaled: Vec<f64> = base.iter().map(|v| v * scale as f64).collect();
            let b = column(&base);
            prop_assert_eq!(&b.flags, &column(&shifted).flags);
            let s = column(&scaled);
            prop_assert_eq!(&b.flags, &s.flags);
            prop_assert!((s.iqr - b.iqr * scale as f64).abs() < 1e-9);
        }
    }
}
