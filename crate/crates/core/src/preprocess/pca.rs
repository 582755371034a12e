use nalgebra::{DMatrix, SymmetricEigen};

use super::{Frame, PreprocessError, Result};

/// Principal axes of centered data.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    names: Vec<String>,
    mean: Vec<f64>,
    /// Covariance eigenvalues, descending, clamped at zero.
    eigenvalues: Vec<f64>,
    /// Unit eigenvectors, one per eigenvalue, each with its first nonzero
    /// coordinate positive.
    components: Vec<Vec<f64>>,
    ratios: Vec<f64>,
}

impl PcaModel {
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Share of total variance carried by each component.
    pub fn explained_variance_ratio(&self) -> &[f64] {
        &self.ratios
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    /// Scores of one centered row on the first `d` components.
    pub fn project_row(&self, row: &[f64], d: usize) -> Vec<f64> {
        self.components[..d]
            .iter()
            .map(|e| e.iter().zip(row).zip(&self.mean).map(|((e, x), m)| e * (x - m)).sum())
            .collect()
    }

    /// Maps component scores back to feature space.
    pub fn reconstruct_row(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (s, e) in scores.iter().zip(&self.components) {
            for (o, ej) in out.iter_mut().zip(e) {
                *o += s * ej;
            }
        }
        out
    }
}

/// Fits principal components from the sample covariance (divisor n - 1) of
/// the mean-centered data.
pub fn fit_pca(frame: &Frame) -> Result<PcaModel> {
    let n = frame.n_rows();
    if n < 2 {
        return Err(PreprocessError::TooFewRows { needed: 2, found: n });
    }
    let p = frame.n_cols();
    let mut mean = vec![0.0; p];
    for row in frame.rows() {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let centered = DMatrix::from_fn(n, p, |i, j| frame.rows()[i][j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let cov = (&cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(cov);

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..p)
        .map(|k| {
            let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            (eig.eigenvalues[k].max(0.0), v)
        })
        .collect();
    let scale = pairs.iter().map(|(l, _)| *l).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    pairs.sort_by(|(la, va), (lb, vb)| {
        if (la - lb).abs() <= 1e-12 * scale {
            // lexicographic order on sign-normalized vectors inside a tie
            vb.iter()
                .zip(va)
                .map(|(b, a)| b.total_cmp(a))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        } else {
            lb.total_cmp(la)
        }
    });

    let total: f64 = pairs.iter().map(|(l, _)| l).sum();
    if total <= 0.0 {
        return Err(PreprocessError::ZeroVariance);
    }
    let ratios = pairs.iter().map(|(l, _)| l / total).collect();
    let (eigenvalues, components) = pairs.into_iter().unzip();
    Ok(PcaModel {
        names: frame.names().to_vec(),
        mean,
        eigenvalues,
        components,
        ratios,
    })
}

/// Projects rows onto the leading `d` components; columns are named `PC1..PCd`.
pub fn project_pca(model: &PcaModel, frame: &Frame, d: usize) -> Result<Frame> {
    let p = model.components.len();
    if d == 0 || d > p {
        return Err(PreprocessError::TooManyComponents {
            requested: d,
            available: p,
        });
    }
    if frame.n_cols() != p {
        return Err(PreprocessError::WidthMismatch {
            expected: p,
            found: frame.n_cols(),
        });
    }
    let rows = frame.rows().iter().map(|r| model.project_row(r, d)).collect();
    Frame::new((1..=d).map(|k| format!("PC{k}")).collect(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_frame(n: usize, p: usize, seed: u64) -> Frame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..n)
            .map(|_| {
                let z: f64 = rng.random_range(-1.0..1.0);
                (0..p).map(|j| z * j as f64 + rng.random_range(-1.0..1.0)).collect()
            })
            .collect();
        Frame::new((0..p).map(|j| format!("f{j}")).collect(), rows).unwrap()
    }

    #[test]
    fn rank_one_line() {
        let rows = (0..10).map(|i| vec![i as f64, 2.0 * i as f64]).collect();
        let f = Frame::new(vec!["x".into(), "y".into()], rows).unwrap();
        let m = fit_pca(&f).unwrap();
        let s5 = 5f64.sqrt();
        assert!((m.components()[0][0] - 1.0 / s5).abs() < 1e-12);
        assert!((m.components()[0][1] - 2.0 / s5).abs() < 1e-12);
        assert!((m.explained_variance_ratio()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_projection_reconstructs() {
        let f = random_frame(40, 5, 3);
        let m = fit_pca(&f).unwrap();
        let proj = project_pca(&m, &f, 5).unwrap();
        for (orig, scores) in f.rows().iter().zip(proj.rows()) {
            for (a, b) in orig.iter().zip(m.reconstruct_row(scores)) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn projected_covariance_is_diagonal() {
        let f = random_frame(50, 5, 11);
        let m = fit_pca(&f).unwrap();
        let proj = project_pca(&m, &f, 5).unwrap();
        let n = proj.n_rows() as f64;
        for a in 0..5 {
            for b in 0..5 {
                let ca = proj.column(a);
                let cb = proj.column(b);
                let ma = ca.iter().sum::<f64>() / n;
                let mb = cb.iter().sum::<f64>() / n;
                let cov: f64 = ca.iter().zip(&cb).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (n - 1.0);
                if a == b {
                    assert!((cov - m.eigenvalues()[a]).abs() < 1e-8);
                } else {
                    assert!(cov.abs() < 1e-8, "cov({a},{b}) = {cov}");
                }
            }
        }
    }

    #[test]
    fn invariants_of_the_decomposition() {
        let f = random_frame(60, 6, 5);
        let m = fit_pca(&f).unwrap();
        let ev = m.eigenvalues();
        assert!(ev.windows(2).all(|w| w[0] >= w[1]) && ev.iter().all(|l| *l >= 0.0));
        assert!((m.explained_variance_ratio().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for (i, a) in m.components().iter().enumerate() {
            for (j, b) in m.components().iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9);
            }
        }
        // trace of the covariance equals the eigenvalue sum
        let n = f.n_rows() as f64;
        let trace: f64 = (0..f.n_cols())
            .map(|j| {
                let c = f.column(j);
                let mu = c.iter().sum::<f64>() / n;
                c.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0)
            })
            .sum();
        assert!((trace - ev.iter().sum::<f64>()).abs() < 1e-9 * trace.max(1.0));
    }

    #[test]
    fn errors() {
        let f = random_frame(10, 3, 1);
        let m = fit_pca(&f).unwrap();
        assert!(matches!(project_pca(&m, &f, 4), Err(PreprocessError::TooManyComponents { .. })));
        assert!(matches!(project_pca(&m, &f, 0), Err(PreprocessError::TooManyComponents { .. })));
        let one = Frame::new(vec!["a".into()], vec![vec![1.0]]).unwrap();
        assert!(matches!(fit_pca(&one), Err(PreprocessError::TooFewRows { .. })));
        let flat = Frame::new(vec!["a".into()], vec![vec![1.0]; 5]).unwrap();
        assert!(matches!(fit_pca(&flat), Err(PreprocessError::ZeroVariance)));
    }

    #[test]
    fn sign_convention_on_ties() {
        // isotropic square: equal eigenvalues, order fixed by the vectors
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let f = Frame::new(vec!["a".into(), "b".into()], rows).unwrap();
        let a = fit_pca(&f).unwrap();
        let b = fit_pca(&f).unwrap();
        assert_eq!(a, b);
        for e in a.components() {
            let first = e.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }
}
