//! Seeded synthetic feature tables for desk-scale experiments.
//!
//! Rows are produced class by class. For a requested class the generator draws
//! a building and a ground motion from overlapping class-conditional
//! distributions, computes a drift from a monotone noisy law, and keeps the row
//! only if the drift falls in the requested class. Exact per-class counts follow
//! the requested mix by largest-remainder rounding.
//!
//! Building descriptors:
//! - stories ~ U{1..10}, `Htot = 3.2 m × stories`
//! - `nvx`, `nvy`: 0 with probability 0.3 (frame only), else U(0.2, 0.85)
//! - `e0 = |N(0, 1.5)|` m, capped at 8 m
//!
//! Ground motion (log-normal factors written as `LN(σ)`, median 1):
//! - `ln PGA ~ N(ln m_c, 0.45)` with `m_c` = 1.4, 3.0, 5.5 m/s² for classes 0/1/2,
//!   clamped to [0.2, 12] m/s²
//! - `PP ~ 0.35·LN(0.35)` s clamped to [0.06, 1.6]
//! - `PGV = 1.3·PGA·PP/2π·LN(0.25)`, `PGD = 2·PGV·PP/2π·LN(0.3)`
//! - `TSD ~ 9·LN(0.45)` s clamped to [1.5, 45], `TBD = TSD·U(1.1, 2.0)`,
//!   `TUD = TBD·U(0.25, 0.75)`
//! - `Ia = π/2g·(0.3·PGA)²·1.1·TSD·LN(0.2)`, `SED = (0.35·PGV)²·TBD·LN(0.25)`,
//!   `CAV = 0.35·PGA·TBD·LN(0.15)`
//! - `EPA = 0.75·PGA·LN(0.15)`, `ASI = 1.0 s × EPA` (the band-mean relation
//!   between the two), `HI = 2.2·PGV·LN(0.2)`, `PGV_PGA = PGV/PGA`
//!
//! Drift (percent): `MIDR = 0.8·(PGA/3)^0.7·(HI/0.5)^0.45·(Htot/16)^0.35·LN(0.3)`.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{
    classify_damage, DamageClass, DatasetError, Feature, FeatureRow, FeatureTable, Result,
};
use crate::signal::STANDARD_GRAVITY;

/// Target class proportions; positive and summing to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMix([f64; DamageClass::COUNT]);

impl ClassMix {
    pub fn new(p: [f64; DamageClass::COUNT]) -> Result<Self> {
        if p.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(DatasetError::BadClassMix(format!("proportions must be positive: {p:?}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(DatasetError::BadClassMix(format!("proportions sum to {sum}, not 1")));
        }
        Ok(Self(p))
    }

    pub fn uniform() -> Self {
        Self([1.0 / 3.0; DamageClass::COUNT])
    }

    pub fn proportions(&self) -> [f64; DamageClass::COUNT] {
        self.0
    }

    /// Largest-remainder split of `n` rows.
    fn counts(&self, n: usize) -> [usize; DamageClass::COUNT] {
        let exact: Vec<f64> = self.0.iter().map(|p| p * n as f64).collect();
        let mut counts = [0usize; DamageClass::COUNT];
        for (c, e) in counts.iter_mut().zip(&exact) {
            *c = e.floor() as usize;
        }
        let mut order: Vec<usize> = (0..DamageClass::COUNT).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - exact[a].floor();
            let rb = exact[b] - exact[b].floor();
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        let short = n - counts.iter().sum::<usize>();
        for &i in order.iter().take(short) {
            counts[i] += 1;
        }
        counts
    }
}

impl Default for ClassMix {
    fn default() -> Self {
        Self::uniform()
    }
}

const PGA_MEDIANS: [f64; DamageClass::COUNT] = [1.4, 3.0, 5.5];

struct Sampler {
    rng: ChaCha8Rng,
    std_normal: Normal<f64>,
}

impl Sampler {
    fn normal(&mut self) -> f64 {
        self.std_normal.sample(&mut self.rng)
    }

    /// Log-normal factor with median 1.
    fn ln(&mut self, sigma: f64) -> f64 {
        (sigma * self.normal()).exp()
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn wall_ratio(&mut self) -> f64 {
        if self.rng.random_bool(0.3) {
            0.0
        } else {
            self.uniform(0.2, 0.85)
        }
    }

    fn candidate(&mut self, class: DamageClass) -> ([f64; Feature::COUNT], f64) {
        let stories = self.rng.random_range(1..=10) as f64;
        let h_tot = 3.2 * stories;
        let n_vx = self.wall_ratio();
        let n_vy = self.wall_ratio();
        let e_0 = (1.5 * self.normal()).abs().min(8.0);

        let pga = (PGA_MEDIANS[class.index()].ln() + 0.45 * self.normal())
            .exp()
            .clamp(0.2, 12.0);
        let pp = (0.35 * self.ln(0.35)).clamp(0.06, 1.6);
        let pgv = 1.3 * pga * pp / (2.0 * PI) * self.ln(0.25);
        let pgd = 2.0 * pgv * pp / (2.0 * PI) * self.ln(0.3);
        let tsd = (9.0 * self.ln(0.45)).clamp(1.5, 45.0);
        let tbd = tsd * self.uniform(1.1, 2.0);
        let tud = tbd * self.uniform(0.25, 0.75);
        let arias = PI / (2.0 * STANDARD_GRAVITY) * (0.3 * pga).powi(2) * 1.1 * tsd * self.ln(0.2);
        let sed = (0.35 * pgv).powi(2) * tbd * self.ln(0.25);
        let cav = 0.35 * pga * tbd * self.ln(0.15);
        let epa = 0.75 * pga * self.ln(0.15);
        let asi = epa;
        let hi = 2.2 * pgv * self.ln(0.2);

        let midr = 0.8
            * (pga / 3.0).powf(0.7)
            * (hi / 0.5).powf(0.45)
            * (h_tot / 16.0).powf(0.35)
            * self.ln(0.3);

        let values = [
            h_tot,
            n_vx,
            n_vy,
            e_0,
            pga,
            pgv,
            pgd,
            arias,
            sed,
            cav,
            asi,
            hi,
            epa,
            pgv / pga,
            pp,
            tud,
            tbd,
            tsd,
        ];
        (values, midr)
    }
}

/// Deterministic synthetic table of `n` labeled rows tagged `synthetic`.
pub fn generate_synthetic(seed: u64, n: usize, mix: ClassMix) -> Result<FeatureTable> {
    if n < 30 {
        return Err(DatasetError::TooFewRows(n));
    }
    let mut sampler = Sampler {
        rng: ChaCha8Rng::seed_from_u64(seed),
        std_normal: Normal::new(0.0, 1.0).expect("unit normal"),
    };
    let counts = mix.counts(n);
    let mut plan: Vec<DamageClass> = DamageClass::ALL
        .iter()
        .zip(counts)
        .flat_map(|(&c, k)| std::iter::repeat_n(c, k))
        .collect();
    plan.shuffle(&mut sampler.rng);

    let mut rows = Vec::with_capacity(n);
    for class in plan {
        let row = loop {
            let (values, midr) = sampler.candidate(class);
            if classify_damage(midr)? == class {
                break FeatureRow::from_values(values).with_midr(midr)?;
            }
        };
        rows.push(row);
    }
    FeatureTable::new("synthetic", rows)
}
