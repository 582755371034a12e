use std::f64::consts::PI;

use super::{
    compute_response_spectrum, trapezoid, Accelerogram, PeriodGrid, Result, Sampled, SignalError,
    STANDARD_GRAVITY,
};

/// Period band for ASI and EPA, seconds.
pub const ASI_BAND: (f64, f64) = (0.1, 0.5);
/// Period band for Housner intensity, seconds.
pub const HI_BAND: (f64, f64) = (0.1, 2.5);
/// Divisor applied to the mean spectral acceleration in the ASI band to get EPA.
pub const EPA_DIVISOR: f64 = 2.5;

/// Settings for [`compute_intensity_measures`].
#[derive(Debug, Clone, PartialEq)]
pub struct ImConfig {
    /// Damping ratio of the response spectra.
    pub damping: f64,
    /// Threshold for uniform and bracketed durations as a fraction of PGA.
    pub threshold_fraction: f64,
    /// Cumulative Arias fractions bounding the significant duration.
    pub arias_bounds: (f64, f64),
    pub periods: PeriodGrid,
    /// Remove a least-squares line from the record before anything else.
    pub detrend: bool,
}

impl Default for ImConfig {
    fn default() -> Self {
        Self {
            damping: 0.05,
            threshold_fraction: 0.05,
            arias_bounds: (0.05, 0.95),
            periods: PeriodGrid::default(),
            detrend: false,
        }
    }
}

impl ImConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(SignalError::BadDamping(self.damping));
        }
        if !(self.threshold_fraction > 0.0 && self.threshold_fraction < 1.0) {
            return Err(SignalError::BadConfig(format!(
                "threshold fraction {} not in (0, 1)",
                self.threshold_fraction
            )));
        }
        let (lo, hi) = self.arias_bounds;
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(SignalError::BadConfig(format!(
                "Arias bounds ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1"
            )));
        }
        let (min, max) = (self.periods.min(), self.periods.max());
        let (band_lo, band_hi) = (ASI_BAND.0.min(HI_BAND.0), ASI_BAND.1.max(HI_BAND.1));
        if min > band_lo + 1e-12 || max < band_hi - 1e-12 {
            return Err(SignalError::GridTooNarrow {
                min,
                max,
                lo: band_lo,
                hi: band_hi,
            });
        }
        Ok(())
    }
}

/// The fourteen scalar ground-motion parameters of a record.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IntensityMeasures {
    /// Peak ground acceleration, m/s².
    pub pga: f64,
    /// Peak ground velocity, m/s.
    pub pgv: f64,
    /// Peak ground displacement, m.
    pub pgd: f64,
    /// Arias intensity, m/s.
    pub arias: f64,
    /// Specific energy density, m²/s.
    pub sed: f64,
    /// Cumulative absolute velocity, m/s.
    pub cav: f64,
    /// Acceleration spectrum intensity, m/s.
    pub asi: f64,
    /// Housner intensity, m.
    pub hi: f64,
    /// Effective peak acceleration, m/s².
    pub epa: f64,
    /// PGV / PGA, s.
    pub vmax_over_amax: f64,
    /// Predominant period, s.
    pub pp: f64,
    /// Uniform duration, s.
    pub tud: f64,
    /// Bracketed duration, s.
    pub tbd: f64,
    /// Significant duration, s.
    pub tsd: f64,
}

impl IntensityMeasures {
    pub const COUNT: usize = 14;

    /// Values in canonical column order (PGA, PGV, PGD, Ia, SED, CAV, ASI, HI,
    /// EPA, PGV_PGA, PP, TUD, TBD, TSD).
    pub fn to_array(&self) -> [f64; Self::COUNT] {
        [
            self.pga,
            self.pgv,
            self.pgd,
            self.arias,
            self.sed,
            self.cav,
            self.asi,
            self.hi,
            self.epa,
            self.vmax_over_amax,
            self.pp,
            self.tud,
            self.tbd,
            self.tsd,
        ]
    }

    pub fn from_array(v: [f64; Self::COUNT]) -> Self {
        Self {
            pga: v[0],
            pgv: v[1],
            pgd: v[2],
            arias: v[3],
            sed: v[4],
            cav: v[5],
            asi: v[6],
            hi: v[7],
            epa: v[8],
            vmax_over_amax: v[9],
            pp: v[10],
            tud: v[11],
            tbd: v[12],
            tsd: v[13],
        }
    }
}

/// Sub-interval `[s0, s1] ⊂ [0, 1]` where the line from `f0` to `f1` exceeds `level`.
fn exceed_interval(f0: f64, f1: f64, level: f64) -> Option<(f64, f64)> {
    match (f0 > level, f1 > level) {
        (true, true) => Some((0.0, 1.0)),
        (false, false) => None,
        (true, false) => Some((0.0, (level - f0) / (f1 - f0))),
        (false, true) => Some(((level - f0) / (f1 - f0), 1.0)),
    }
}

/// Uniform and bracketed durations of `|a(t)| > level` on the piecewise-linear
/// interpolant of the samples.
fn threshold_durations(samples: &[f64], dt: f64, level: f64) -> (f64, f64) {
    let mut uniform = 0.0;
    let mut first: Option<f64> = None;
    let mut last = 0.0;
    for (i, w) in samples.windows(2).enumerate() {
        let t0 = i as f64 * dt;
        for (f0, f1) in [(w[0], w[1]), (-w[0], -w[1])] {
            if let Some((s0, s1)) = exceed_interval(f0, f1, level) {
                uniform += (s1 - s0) * dt;
                let start = t0 + s0 * dt;
                let end = t0 + s1 * dt;
                first = Some(first.map_or(start, |f: f64| f.min(start)));
                last = f64::max(last, end);
            }
        }
    }
    let bracketed = first.map_or(0.0, |f| last - f);
    (uniform, bracketed)
}

/// Time between the `lo` and `hi` fractions of the cumulative squared-acceleration
/// (Husid) curve.
fn significant_duration(samples: &[f64], dt: f64, lo: f64, hi: f64) -> f64 {
    let mut husid = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    husid.push(0.0);
    for w in samples.windows(2) {
        acc += 0.5 * dt * (w[0] * w[0] + w[1] * w[1]);
        husid.push(acc);
    }
    if acc <= 0.0 {
        return 0.0;
    }
    let crossing = |fraction: f64| {
        let target = fraction * acc;
        let i = husid.partition_point(|&h| h < target);
        if i == 0 {
            return 0.0;
        }
        if i >= husid.len() {
            return (husid.len() - 1) as f64 * dt;
        }
        let (h0, h1) = (husid[i - 1], husid[i]);
        let w = if h1 > h0 { (target - h0) / (h1 - h0) } else { 0.0 };
        (i as f64 - 1.0 + w) * dt
    };
    crossing(hi) - crossing(lo)
}

/// Extracts all fourteen intensity measures from one record.
///
/// A record whose peak acceleration is zero yields
/// [`SignalError::UndefinedRatio`], carrying the measures with zero durations
/// and a zero PGV/PGA placeholder.
pub fn compute_intensity_measures(acc: &Accelerogram, cfg: &ImConfig) -> Result<IntensityMeasures> {
    cfg.validate()?;
    let detrended;
    let acc = if cfg.detrend {
        detrended = acc.detrended();
        &detrended
    } else {
        acc
    };
    let dt = acc.dt();
    let a = acc.samples();
    let vel = acc.velocity();
    let disp = acc.displacement();

    let pga = acc.peak_abs();
    let pgv = vel.peak_abs();
    let pgd = disp.peak_abs();
    let arias = PI / (2.0 * STANDARD_GRAVITY) * trapezoid(dt, a.iter().map(|x| x * x));
    let sed = trapezoid(dt, vel.samples.iter().map(|x| x * x));
    let cav = trapezoid(dt, a.iter().map(|x| x.abs()));

    let spectrum = compute_response_spectrum(acc, cfg.damping, &cfg.periods)?;
    let asi = spectrum.band_integral(&spectrum.sa, ASI_BAND.0, ASI_BAND.1);
    let hi = spectrum.band_integral(&spectrum.psv, HI_BAND.0, HI_BAND.1);
    let epa = asi / (ASI_BAND.1 - ASI_BAND.0) / EPA_DIVISOR;
    // first index wins, so ties resolve to the shortest period
    let mut pp_index = 0;
    for (i, &sa) in spectrum.sa.iter().enumerate() {
        if sa > spectrum.sa[pp_index] {
            pp_index = i;
        }
    }
    let pp = spectrum.periods[pp_index];

    let mut measures = IntensityMeasures {
        pga,
        pgv,
        pgd,
        arias,
        sed,
        cav,
        asi,
        hi,
        epa,
        vmax_over_amax: 0.0,
        pp,
        tud: 0.0,
        tbd: 0.0,
        tsd: 0.0,
    };
    if pga == 0.0 {
        return Err(SignalError::UndefinedRatio {
            id: acc.id().to_string(),
            measures: Box::new(measures),
        });
    }
    let (tud, tbd) = threshold_durations(a, dt, cfg.threshold_fraction * pga);
    measures.vmax_over_amax = pgv / pga;
    measures.tud = tud;
    measures.tbd = tbd;
    measures.tsd = significant_duration(a, dt, cfg.arias_bounds.0, cfg.arias_bounds.1);
    Ok(measures)
}
