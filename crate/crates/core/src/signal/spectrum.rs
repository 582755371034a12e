use std::f64::consts::PI;

use super::{Accelerogram, Result, Sampled, SignalError};

/// Shortest period accepted on a grid.
pub const MIN_PERIOD: f64 = 0.02;

/// Strictly increasing list of oscillator periods in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodGrid(Vec<f64>);

impl PeriodGrid {
    pub fn new(periods: Vec<f64>) -> Result<Self> {
        if periods.is_empty() {
            return Err(SignalError::EmptyGrid);
        }
        for &t in &periods {
            // the tiny slack admits 0.02 produced by float arithmetic
            if !(t.is_finite() && t > 0.0 && t >= MIN_PERIOD * (1.0 - 1e-9)) {
                return Err(SignalError::BadPeriod(t));
            }
        }
        if periods.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SignalError::UnsortedGrid);
        }
        Ok(Self(periods))
    }

    /// `start, start + step, ...` up to and including `stop` (within half a step).
    pub fn uniform(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || !(stop >= start) {
            return Err(SignalError::BadConfig(format!(
                "period grid start={start} stop={stop} step={step}"
            )));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        Self::new((0..count).map(|i| start + step * i as f64).collect())
    }

    pub fn periods(&self) -> &[f64] {
        &self.0
    }

    pub fn min(&self) -> f64 {
        self.0[0]
    }

    pub fn max(&self) -> f64 {
        self.0[self.0.len() - 1]
    }
}

impl Default for PeriodGrid {
    /// 0.02 s to 4.0 s in steps of 0.02 s.
    fn default() -> Self {
        Self((1..=200).map(|i| 0.02 * i as f64).collect())
    }
}

/// Elastic spectrum at fixed damping.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseSpectrum {
    pub damping: f64,
    pub periods: Vec<f64>,
    /// Pseudo-spectral acceleration, m/s².
    pub sa: Vec<f64>,
    /// Pseudo-velocity, m/s.
    pub psv: Vec<f64>,
    /// Peak relative displacement, m.
    pub sd: Vec<f64>,
}

impl ResponseSpectrum {
    /// Trapezoidal integral of `values` over periods in `[lo, hi]`, with linear
    /// interpolation at band edges that fall between grid points.
    pub fn band_integral(&self, values: &[f64], lo: f64, hi: f64) -> f64 {
        band_integral(&self.periods, values, lo, hi)
    }
}

pub(crate) fn band_integral(xs: &[f64], ys: &[f64], lo: f64, hi: f64) -> f64 {
    let interp = |x: f64, i: usize| {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let w = (x - x0) / (x1 - x0);
        ys[i] + w * (ys[i + 1] - ys[i])
    };
    let mut total = 0.0;
    for i in 0..xs.len().saturating_sub(1) {
        let a = xs[i].max(lo);
        let b = xs[i + 1].min(hi);
        if b <= a {
            continue;
        }
        let ya = if a == xs[i] { ys[i] } else { interp(a, i) };
        let yb = if b == xs[i + 1] { ys[i + 1] } else { interp(b, i) };
        total += 0.5 * (b - a) * (ya + yb);
    }
    total
}

/// Peak relative displacement of a damped linear oscillator under base
/// excitation, integrated with the average-acceleration Newmark scheme
/// (gamma = 1/2, beta = 1/4). Each record step is split into sub-steps so that
/// the integration step never exceeds `period / 20`.
fn peak_displacement(ground: &[f64], dt: f64, period: f64, damping: f64) -> f64 {
    let omega = 2.0 * PI / period;
    let k = omega * omega;
    let c = 2.0 * damping * omega;
    let substeps = (dt / (period / 20.0)).ceil().max(1.0) as usize;
    let h = dt / substeps as f64;

    let a_coef = 4.0 / (h * h);
    let v_coef = 4.0 / h;
    let c_coef = 2.0 / h;
    let k_eff = a_coef + c * c_coef + k;

    let (mut u, mut v) = (0.0_f64, 0.0_f64);
    let mut a = -ground[0];
    let mut peak = 0.0_f64;
    for w in ground.windows(2) {
        let (g0, g1) = (w[0], w[1]);
        for s in 1..=substeps {
            let frac = s as f64 / substeps as f64;
            let p = -(g0 + frac * (g1 - g0));
            let rhs = p + a_coef * u + v_coef * v + a + c * (c_coef * u + v);
            let u_next = rhs / k_eff;
            let du = u_next - u;
            let v_next = c_coef * du - v;
            let a_next = a_coef * du - v_coef * v - a;
            u = u_next;
            v = v_next;
            a = a_next;
            peak = peak.max(u.abs());
        }
    }
    peak
}

pub fn compute_response_spectrum(
    acc: &Accelerogram,
    damping: f64,
    periods: &PeriodGrid,
) -> Result<ResponseSpectrum> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(SignalError::BadDamping(damping));
    }
    let n = periods.periods().len();
    let mut spectrum = ResponseSpectrum {
        damping,
        periods: periods.periods().to_vec(),
        sa: Vec::with_capacity(n),
        psv: Vec::with_capacity(n),
        sd: Vec::with_capacity(n),
    };
    for &t in periods.periods() {
        let omega = 2.0 * PI / t;
        let sd = peak_displacement(acc.samples(), acc.dt(), t, damping);
        spectrum.sd.push(sd);
        spectrum.psv.push(sd * omega);
        spectrum.sa.push(sd * omega * omega);
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = PeriodGrid::default();
        assert_eq!(g.periods().len(), 200);
        assert!((g.min() - 0.02).abs() < 1e-15);
        assert!((g.max() - 4.0).abs() < 1e-12);
        assert_eq!(PeriodGrid::uniform(0.02, 4.0, 0.02).unwrap().periods().len(), 200);
    }

    #[test]
    fn grid_validation() {
        assert!(matches!(PeriodGrid::new(vec![]), Err(SignalError::EmptyGrid)));
        assert!(matches!(PeriodGrid::new(vec![0.0, 1.0]), Err(SignalError::BadPeriod(_))));
        assert!(matches!(PeriodGrid::new(vec![-1.0]), Err(SignalError::BadPeriod(_))));
        assert!(matches!(PeriodGrid::new(vec![0.01]), Err(SignalError::BadPeriod(_))));
        assert!(matches!(PeriodGrid::new(vec![0.5, 0.5]), Err(SignalError::UnsortedGrid)));
    }

    #[test]
    fn zero_record_has_zero_spectrum() {
        let acc = Accelerogram::new("z", 0.01, vec![0.0; 300]).unwrap();
        let s = compute_response_spectrum(&acc, 0.05, &PeriodGrid::default()).unwrap();
        assert!(s.sa.iter().chain(&s.psv).chain(&s.sd).all(|v| *v == 0.0));
    }

    #[test]
    fn bad_damping() {
        let acc = Accelerogram::new("z", 0.01, vec![0.0; 3]).unwrap();
        assert!(compute_response_spectrum(&acc, 0.0, &PeriodGrid::default()).is_err());
        assert!(compute_response_spectrum(&acc, 1.0, &PeriodGrid::default()).is_err());
    }

    #[test]
    fn band_integral_of_linear_function() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        // trapezoid is exact on lines, including interpolated edges
        let exact = |a: f64, b: f64| (b * b + b) - (a * a + a);
        assert!((band_integral(&xs, &ys, 0.1, 2.5) - exact(0.1, 2.5)).abs() < 1e-12);
        assert!((band_integral(&xs, &ys, 0.35, 0.5) - exact(0.35, 0.5)).abs() < 1e-12);
    }

    #[test]
    fn resonance_amplification() {
        let t0 = 1.0;
        let xi = 0.05;
        let dt = 0.005;
        let n = (50.0 * t0 / dt) as usize + 1;
        let samples = (0..n)
            .map(|i| (2.0 * PI * i as f64 * dt / t0).sin())
            .collect();
        let acc = Accelerogram::new("harm", dt, samples).unwrap();
        let grid = PeriodGrid::new(vec![t0]).unwrap();
        let s = compute_response_spectrum(&acc, xi, &grid).unwrap();
        let steady = (t0 / (2.0 * PI)).powi(2) / (2.0 * xi);
        assert!(((s.sd[0] - steady) / steady).abs() < 0.05, "{} vs {}", s.sd[0], steady);
    }
}
