//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

/// Solves `max Σa - ½ aᵀQa` subject to `0 ≤ a ≤ c`, `Σ a t = 0` by
/// accelerated projected gradient on the dense problem, with `Q_ij = t_i t_j K_ij`.
/// Returns the multipliers and the dual objective.
pub fn dual_qp(gram: &[f64], t: &[f64], c: f64) -> (Vec<f64>, f64) {
    let n = t.len();
    let q = |i: usize, j: usize| t[i] * t[j] * gram[i * n + j];
    // Lipschitz bound from the Frobenius norm.
    let lip = (0..n * n).map(|k| q(k / n, k % n).powi(2)).sum::<f64>().sqrt().max(1e-12);
    let step = 1.0 / lip;
    let mut a = vec![0.0; n];
    let mut prev = a.clone();
    let mut z = a.clone();
    let mut momentum = 1.0f64;
    let objective = |a: &[f64]| {
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += a[i] * a[j] * q(i, j);
            }
        }
        a.iter().sum::<f64>() - 0.5 * quad
    };
    let mut best = objective(&a);
    for _ in 0..400_000 {
        let grad: Vec<f64> = (0..n).map(|i| 1.0 - (0..n).map(|j| q(i, j) * z[j]).sum::<f64>()).collect();
        let v: Vec<f64> = (0..n).map(|i| z[i] + step * grad[i]).collect();
        let next = project(&v, t, c);
        let next_momentum = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let obj = objective(&next);
        if obj < best - 1e-15 {
            if z == a {
                // a plain step no longer improves: converged to rounding
                break;
            }
            // restart the momentum when the objective drops
            momentum = 1.0;
            z = a.clone();
            continue;
        }
        let change = next.iter().zip(&a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prev.clone_from(&a);
        a = next;
        best = obj;
        let beta = (momentum - 1.0) / next_momentum;
        z = (0..n).map(|i| a[i] + beta * (a[i] - prev[i])).collect();
        momentum = next_momentum;
        if change < 1e-13 {
            break;
        }
    }
    let obj = objective(&a);
    (a, obj)
}

/// Euclidean projection onto `{0 ≤ a ≤ c, Σ a t = 0}` via bisection on the
/// multiplier of the equality constraint.
pub fn project(v: &[f64], t: &[f64], c: f64) -> Vec<f64> {
    let at = |mu: f64| -> Vec<f64> { v.iter().zip(t).map(|(x, y)| (x - mu * y).clamp(0.0, c)).collect() };
    let residual = |mu: f64| -> f64 { at(mu).iter().zip(t).map(|(a, y)| a * y).sum() };
    let span = v.iter().map(|x| x.abs()).fold(0.0, f64::max) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counting half.
pub fn concordant_fraction(positive: &[bool], scores: &[f64]) -> Option<f64> {
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..positive.len() {
        for j in 0..positive.len() {
            if positive[i] && !positive[j] {
                pairs += 1;
                total += if scores[i] > scores[j] {
                    1.0
                } else if scores[i] == scores[j] {
                    0.5
                } else {
                    0.0
                };
            }
        }
    }
    (pairs > 0).then(|| total / pairs as f64)
}

/// Explicit degree-2 feature map with `(1 + x·y)² = φ(x)·φ(y)`.
pub fn quadratic_features(x: &[f64]) -> Vec<f64> {
    let mut phi = vec![1.0];
    phi.extend(x.iter().map(|v| std::f64::consts::SQRT_2 * v));
    for i in 0..x.len() {
        phi.push(x[i] * x[i]);
        for j in i + 1..x.len() {
            phi.push(std::f64::consts::SQRT_2 * x[i] * x[j]);
        }
    }
    phi
}

/// Smallest eigenvalue of a symmetric row-major matrix.
pub fn min_eigenvalue(m: &[f64], n: usize) -> f64 {
    let mat = nalgebra::DMatrix::from_row_slice(n, n, m);
    mat.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}
