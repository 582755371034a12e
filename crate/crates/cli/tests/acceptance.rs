//! Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use seisclass_core::dataset::{generate_synthetic, ClassMix};
use seisclass_core::eval::{
    basic_metrics, binary_auc, cohen_kappa, confusion, cross_validate_table, kfold_plan, mcc, mcc_binary, Averaging,
    ConfusionMatrix, CvConfig, CvResult,
};
use seisclass_core::models::{train_binary, KernelSpec, ModelSpec, SvmParams};
use seisclass_core::signal::{
    compute_intensity_measures, compute_response_spectrum, Accelerogram, ImConfig, IntensityMeasures, PeriodGrid,
    STANDARD_GRAVITY,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn sampled(id: &str, dt: f64, duration: f64, f: impl Fn(f64) -> f64) -> Accelerogram {
    let n = (duration / dt).round() as usize + 1;
    Accelerogram::new(id, dt, (0..n).map(|i| f(i as f64 * dt)).collect()).unwrap()
}

fn check_measures(name: &str, expected: [(&str, f64, f64); 5]) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (field, got, want) in expected {
        let err = (got - want).abs() / want.abs();
        worst = worst.max(err);
        ensure(err <= 1e-3, || format!("{name} {field}: {got} vs {want}"))?;
    }
    Ok(worst)
}

fn criterion_1() -> Outcome {
    let dt = 0.005;
    let cfg = ImConfig::default();
    let g = STANDARD_GRAVITY;
    let mut worst = 0.0f64;

    let (c, t) = (2.0, 10.0);
    let im = compute_intensity_measures(&sampled("const", dt, t, |_| c), &cfg).map_err(|e| e.to_string())?;
    worst = worst.max(check_measures(
        "constant",
        [
            ("pga", im.pga, c),
            ("pgv", im.pgv, c * t),
            ("arias", im.arias, PI / (2.0 * g) * c * c * t),
            ("cav", im.cav, c * t),
            ("sed", im.sed, c * c * t.powi(3) / 3.0),
        ],
    )?);

    let (a, t) = (3.0, 20.0);
    let w = 2.0 * PI;
    let arias = PI / (2.0 * g) * a * a * t / 2.0;
    let cav = a * t * 2.0 / PI;
    let sine = compute_intensity_measures(&sampled("sin", dt, t, |x| a * (w * x).sin()), &cfg).map_err(|e| e.to_string())?;
    // Starting at rest, v = A/(2π)(1 - cos 2πt): peak A/π, mean square 1.5 (A/2π)².
    worst = worst.max(check_measures(
        "sine",
        [
            ("pga", sine.pga, a),
            ("pgv", sine.pgv, a / PI),
            ("arias", sine.arias, arias),
            ("cav", sine.cav, cav),
            ("sed", sine.sed, 1.5 * (a / w).powi(2) * t),
        ],
    )?);
    let cosine = compute_intensity_measures(&sampled("cos", dt, t, |x| a * (w * x).cos()), &cfg).map_err(|e| e.to_string())?;
    worst = worst.max(check_measures(
        "cosine",
        [
            ("pga", cosine.pga, a),
            ("pgv", cosine.pgv, a / w),
            ("arias", cosine.arias, arias),
            ("cav", cosine.cav, cav),
            ("sed", cosine.sed, 0.5 * (a / w).powi(2) * t),
        ],
    )?);
    Ok(format!("constant, sine and cosine records; worst relative error {worst:.2e} (limit 1e-3)"))
}

fn random_record(seed: u64, n: usize) -> Accelerogram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut smooth = 0.0;
    let samples = (0..n)
        .map(|i| {
            smooth = 0.7 * smooth + normal.sample(&mut rng);
            let t = i as f64 / n as f64;
            smooth * (t * 8.0).min(1.0) * (1.0 - t).powf(0.5)
        })
        .collect();
    let dt = [0.005, 0.01, 0.02][rng.random_range(0..3)];
    Accelerogram::new(format!("r{seed}"), dt, samples).unwrap()
}

fn criterion_2() -> Outcome {
    let (t0, dt, xi) = (0.5, 0.005, 0.05);
    let acc = sampled("res", dt, 50.0 * t0, |t| (2.0 * PI * t / t0).sin());
    let s = compute_response_spectrum(&acc, xi, &PeriodGrid::new(vec![t0]).unwrap()).map_err(|e| e.to_string())?;
    let steady = 1.0 / (2.0 * xi) * (t0 / (2.0 * PI)).powi(2);
    let dev = (s.sd[0] - steady).abs() / steady;
    ensure(dev <= 0.05, || format!("resonant sd {} vs {steady}", s.sd[0]))?;
    let mut worst = 0.0f64;
    let mut checked = 0;
    for acc in [acc, random_record(77, 1500)] {
        let s = compute_response_spectrum(&acc, xi, &PeriodGrid::default()).map_err(|e| e.to_string())?;
        for i in 0..s.periods.len() {
            let w = 2.0 * PI / s.periods[i];
            for (got, want) in [(s.psv[i], s.sd[i] * w), (s.sa[i], s.sd[i] * w * w)] {
                let err = (got - want).abs() / want.abs().max(1e-300);
                worst = worst.max(err);
                ensure(err <= 1e-9, || format!("period {}: {got} vs {want}", s.periods[i]))?;
            }
            checked += 1;
        }
    }
    Ok(format!(
        "resonant sd off steady state by {:.2}% (limit 5%); identities on {checked} periods, worst {worst:.1e} (limit 1e-9)",
        dev * 100.0
    ))
}

fn criterion_3() -> Outcome {
    let cfg = ImConfig::default();
    let linear = |im: &IntensityMeasures| [im.pga, im.pgv, im.pgd, im.cav, im.asi, im.hi, im.epa];
    let quadratic = |im: &IntensityMeasures| [im.arias, im.sed];
    let invariant = |im: &IntensityMeasures| [im.pp, im.tud, im.tbd, im.tsd, im.vmax_over_amax];
    let mut checks = 0;
    for seed in 0..20u64 {
        let acc = random_record(seed, 600 + 37 * seed as usize);
        let base = compute_intensity_measures(&acc, &cfg).map_err(|e| e.to_string())?;
        let spectrum = compute_response_spectrum(&acc, 0.05, &PeriodGrid::default()).map_err(|e| e.to_string())?;
        for lambda in [0.5, 2.0] {
            let scaled = acc.scaled(lambda);
            let im = compute_intensity_measures(&scaled, &cfg).map_err(|e| e.to_string())?;
            let sa = compute_response_spectrum(&scaled, 0.05, &PeriodGrid::default()).map_err(|e| e.to_string())?.sa;
            let pairs = linear(&base)
                .into_iter()
                .zip(linear(&im))
                .map(|(a, b)| (a * lambda, b))
                .chain(quadratic(&base).into_iter().zip(quadratic(&im)).map(|(a, b)| (a * lambda * lambda, b)))
                .chain(invariant(&base).into_iter().zip(invariant(&im)))
                .chain(spectrum.sa.iter().zip(&sa).map(|(a, b)| (a * lambda, *b)));
            for (want, got) in pairs {
                ensure(rel_close(want, got, 1e-9), || format!("seed {seed} λ {lambda}: {got} vs {want}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("20 records × λ∈{{0.5, 2}}: {checks} scaled quantities within 1e-9"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_gap, mut worst_eq) = (0.0f64, 0.0f64);
    for case in 0..50 {
        let n = rng.random_range(2..=6);
        let x: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]).collect();
        let mut t: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        t[0] = 1;
        t[1] = -1;
        let kernel = match rng.random_range(0..3) {
            0 => KernelSpec::Polynomial {
                tau: rng.random_range(0.0..2.0),
                degree: rng.random_range(1..=3),
            },
            1 => KernelSpec::Rbf {
                sigma: rng.random_range(0.3..2.0),
            },
            _ => KernelSpec::GaussianLaplace {
                gamma: rng.random_range(0.3..2.0),
            },
        };
        let c = rng.random_range(0.1..10.0);
        let m = train_binary(&x, &t, kernel, SvmParams { c, tol: 1e-9, max_iter: 1_000_000 }).map_err(|e| e.to_string())?;
        let y: Vec<f64> = t.iter().map(|&v| f64::from(v)).collect();
        let (_, oracle) = common::dual_qp(&kernel.gram(&x), &y, c);
        let gap = (m.dual_objective() - oracle).abs();
        worst_gap = worst_gap.max(gap);
        worst_eq = worst_eq.max(m.equality_residual().abs());
        ensure(gap <= 1e-6, || format!("case {case}: dual {} vs oracle {oracle}", m.dual_objective()))?;
        ensure(m.equality_residual().abs() <= 1e-8, || format!("case {case}: |Σ a t| = {}", m.equality_residual()))?;
        ensure(m.alphas().iter().all(|&a| (0.0..=c).contains(&a)), || format!("case {case}: multiplier outside [0, c]"))?;
    }
    Ok(format!(
        "50 problems; worst objective gap {worst_gap:.1e} (limit 1e-6), worst |Σ a t| {worst_eq:.1e} (limit 1e-8)"
    ))
}

fn criterion_5() -> Outcome {
    let x = vec![vec![0.0, 0.0], vec![2.0, 2.0]];
    let linear = KernelSpec::Polynomial { tau: 0.0, degree: 1 };
    let params = SvmParams { c: 10.0, tol: 1e-9, max_iter: 1_000_000 };
    let m = train_binary(&x, &[-1, 1], linear, params).map_err(|e| e.to_string())?;
    let w = m.linear_weights();
    let b = m.bias();
    ensure((w[0] - 0.5).abs() <= 1e-4 && (w[1] - 0.5).abs() <= 1e-4 && (b + 1.0).abs() <= 1e-4, || {
        format!("w = {w:?}, b = {b}")
    })?;
    let xor = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
    let t = [-1, -1, 1, 1];
    let m = train_binary(&xor, &t, KernelSpec::Rbf { sigma: 0.5 }, SvmParams { c: 100.0, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let correct = xor.iter().zip(&t).filter(|(r, &l)| m.predict(r).ok() == Some(l)).count();
    ensure(correct == 4, || format!("XOR training accuracy {}/4", correct))?;
    Ok(format!("w = ({:.6}, {:.6}), b = {b:.6}; XOR training accuracy 1.0", w[0], w[1]))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let k = KernelSpec::Polynomial { tau: 1.0, degree: 2 };
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let dim = rng.random_range(1..=5);
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
        let (px, py) = (common::quadratic_features(&x), common::quadratic_features(&y));
        let explicit: f64 = px.iter().zip(&py).map(|(a, b)| a * b).sum();
        let err = (k.eval(&x, &y).map_err(|e| e.to_string())? - explicit).abs();
        worst = worst.max(err);
        ensure(err <= 1e-10, || format!("kernel {err:e} off the feature map"))?;
    }
    let mut min_eig = f64::INFINITY;
    for _ in 0..20 {
        let n = rng.random_range(2..25);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        for kernel in [
            KernelSpec::Polynomial { tau: 1.0, degree: 2 },
            KernelSpec::Rbf { sigma: 0.7 },
            KernelSpec::GaussianLaplace { gamma: 1.3 },
        ] {
            let g = kernel.gram(&pts);
            let symmetric = (0..n).all(|i| (0..n).all(|j| g[i * n + j] == g[j * n + i]));
            ensure(symmetric, || format!("{kernel} Gram matrix not symmetric"))?;
            let e = common::min_eigenvalue(&g, n);
            min_eig = min_eig.min(e);
            ensure(e >= -1e-8, || format!("{kernel} Gram min eigenvalue {e}"))?;
        }
    }
    Ok(format!(
        "1000 pairs, worst |k - φ·φ| {worst:.1e} (limit 1e-10); 60 Gram matrices symmetric, min eigenvalue {min_eig:.1e} (limit -1e-8)"
    ))
}

fn criterion_7() -> Outcome {
    let labels = |n: usize| (0..n).map(|c| format!("c{c}")).collect::<Vec<_>>();
    let err = |e: seisclass_core::eval::EvalError| e.to_string();

    let cm = confusion(&[1, 1, 0, 0], &[1, 0, 0, 1], &labels(2)).map_err(err)?;
    ensure(cm.row(0) == [1, 1] && cm.row(1) == [1, 1], || format!("hand count {cm:?}"))?;

    let binary = ConfusionMatrix::from_rows(&[vec![35, 10], vec![5, 50]]).map_err(err)?;
    let m = basic_metrics(&binary, Averaging::Macro).map_err(err)?;
    let pos = &m.per_class[1];
    ensure(m.accuracy == 85.0 / 100.0, || format!("accuracy {}", m.accuracy))?;
    ensure(pos.precision.value == 50.0 / 60.0, || format!("precision {}", pos.precision.value))?;
    ensure(pos.recall.value == 50.0 / 55.0, || format!("recall {}", pos.recall.value))?;
    ensure((pos.f_score.value - 100.0 / 115.0).abs() <= 1e-15, || format!("F {}", pos.f_score.value))?;
    let expected_mcc = (50.0 * 35.0 - 10.0 * 5.0) / (60.0f64 * 55.0 * 45.0 * 40.0).sqrt();
    let got_mcc = mcc(&binary).map_err(err)?.value;
    ensure((got_mcc - expected_mcc).abs() <= 1e-15, || format!("MCC {got_mcc} vs {expected_mcc}"))?;
    let kappa_cm = ConfusionMatrix::from_rows(&[vec![40, 10], vec![10, 40]]).map_err(err)?;
    let kappa = cohen_kappa(&kappa_cm).map_err(err)?.value;
    ensure((kappa - 0.6).abs() <= 1e-15, || format!("κ {kappa}"))?;
    let auc = binary_auc(&[true, false, true, false], &[0.9, 0.8, 0.4, 0.2]);
    ensure(auc == Some(0.75), || format!("AUC {auc:?}"))?;

    let mut grid = 0;
    for tp in 0..=20u64 {
        for fp in 0..=20u64 {
            for fn_ in 0..=20u64 {
                for tn in 0..=20u64 {
                    if tp + fp + fn_ + tn == 0 {
                        continue;
                    }
                    let cm = ConfusionMatrix::from_rows(&[vec![tn, fp], vec![fn_, tp]]).map_err(err)?;
                    let multi = mcc(&cm).map_err(err)?.value;
                    let two = mcc_binary(tp, fp, fn_, tn).value;
                    ensure(multi.to_bits() == two.to_bits(), || format!("MCC {tp} {fp} {fn_} {tn}: {multi} vs {two}"))?;
                    grid += 1;
                }
            }
        }
    }

    let mut auc_cases = 0;
    for n in 2..=12usize {
        let patterns: Vec<Vec<f64>> = vec![
            (0..n).map(|i| i as f64).collect(),
            (0..n).map(|i| (i % 3) as f64).collect(),
            (0..n).map(|i| ((i * 7) % 5) as f64 * 0.5).collect(),
        ];
        for mask in 0..1u32 << n {
            let positive: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            for scores in &patterns {
                let got = binary_auc(&positive, scores);
                let want = common::concordant_fraction(&positive, scores);
                let same = match (got, want) {
                    (Some(a), Some(b)) => (a - b).abs() <= 1e-12,
                    (None, None) => true,
                    _ => false,
                };
                ensure(same, || format!("AUC {positive:?} {scores:?}: {got:?} vs {want:?}"))?;
                auc_cases += 1;
            }
        }
    }
    Ok(format!(
        "hand examples exact (MCC {got_mcc:.6}); {grid} 2×2 matrices bit-identical to the binary formula; {auc_cases} AUC inputs match pair counting"
    ))
}

/// Everything in a CV result except timings.
fn timeless(r: &CvResult) -> String {
    let mut m = r.metrics;
    m.wall_time = 0.0;
    let folds: Vec<_> = r
        .folds
        .iter()
        .map(|f| (f.fold, f.train_size, f.test_size, f.skipped.clone(), f.confusion.clone(), f.accuracy))
        .collect();
    format!("{m:?}|{:?}|{folds:?}|{:?}|{:?}|{:?}", r.confusion, r.roc_curves, r.predictions, r.flags)
}

fn criterion_8() -> (Outcome, Option<String>) {
    let run = || -> Result<(String, String), String> {
        let table = generate_synthetic(8, 100, ClassMix::uniform()).map_err(|e| e.to_string())?;
        let strata: Vec<usize> = table.labels().unwrap().iter().map(|c| c.index()).collect();
        let plan = kfold_plan(100, 10, 42, Some(&strata)).map_err(|e| e.to_string())?;
        let mut seen = vec![0usize; 100];
        for f in 0..10 {
            for i in plan.test_indices(f) {
                seen[i] += 1;
            }
        }
        ensure(seen.iter().all(|&c| c == 1), || "an index is not in exactly one test fold".into())?;
        let spec: ModelSpec = "svm-gaussian".parse().map_err(|e: seisclass_core::models::ModelError| e.to_string())?;
        let mut reports = Vec::new();
        for workers in [1, 4] {
            let cfg = CvConfig {
                folds: 10,
                workers,
                ..CvConfig::default()
            };
            let r = cross_validate_table(&table, &spec, &cfg).map_err(|e| e.to_string())?;
            ensure(r.confusion.total() == 100, || format!("pooled total {}", r.confusion.total()))?;
            ensure(r.predictions.iter().all(Option::is_some), || "row without prediction".into())?;
            reports.push(timeless(&r));
        }
        ensure(reports[0] == reports[1], || "results differ between 1 and 4 workers".into())?;
        Ok(("100 indices each in one test fold; pooled total 100; 1 and 4 workers agree".into(), reports.remove(0)))
    };
    match run() {
        Ok((msg, fingerprint)) => (Ok(msg), Some(fingerprint)),
        Err(e) => (Err(e), None),
    }
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_seisclass"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("seisclass {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr).trim())
    })
}

fn pipeline(dir: &Path) -> Result<(), String> {
    let d = dir.to_str().unwrap();
    run_cli(&["synth", "--seed", "1", "-n", "1500", "--out-dir", d])?;
    run_cli(&["compare", &format!("{d}/synthetic.csv"), "--seed", "1", "--out-dir", d])
}

fn criterion_9(dir: &Path) -> Outcome {
    pipeline(dir)?;
    let table = seisclass_core::dataset::read_table(&dir.join("synthetic.csv")).map_err(|e| e.to_string())?;
    let counts = table.class_counts();
    let majority = *counts.iter().max().unwrap() as f64 / table.len() as f64;
    let report = std::fs::read_to_string(dir.join("comparison.csv")).map_err(|e| e.to_string())?;
    let mut lines = report.lines();
    ensure(lines.next() == Some(seisclass_core::eval::COMPARISON_HEADER), || "comparison header".into())?;
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    ensure(rows.len() == 8, || format!("{} report rows", rows.len()))?;
    let acc: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    ensure(acc.windows(2).all(|w| w[0] >= w[1]), || "report not sorted by accuracy".into())?;
    let mut weakest_svm = f64::INFINITY;
    for r in rows.iter().filter(|r| r[0].starts_with("svm")) {
        let a: f64 = r[2].parse().unwrap();
        weakest_svm = weakest_svm.min(a);
        ensure(a >= majority + 0.15, || format!("{} accuracy {a} vs majority {majority:.4}", r[0]))?;
    }
    let best_kappa: f64 = rows[0][7].parse().unwrap();
    ensure(best_kappa > 0.4, || format!("best κ {best_kappa}"))?;
    Ok(format!(
        "8 rows sorted; majority rate {majority:.4}, weakest SVM {weakest_svm:.4} (needs ≥ {:.4}); best κ {best_kappa:.4} ({})",
        majority + 0.15,
        rows[0][1]
    ))
}

fn without_time(path: &Path) -> Result<String, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    if path.file_name().is_some_and(|n| n == "comparison.csv") {
        Ok(text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head)).collect::<Vec<_>>().join("\n"))
    } else {
        Ok(text)
    }
}

fn criterion_10(first: &Path, second: &Path, fingerprint: Option<&str>) -> Outcome {
    pipeline(second)?;
    let mut names: Vec<_> = std::fs::read_dir(first)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.file_name()))
        .collect();
    names.sort();
    let other = std::fs::read_dir(second).map_err(|e| e.to_string())?.count();
    ensure(other == names.len(), || format!("{} vs {other} output files", names.len()))?;
    for name in &names {
        let (a, b) = (without_time(&first.join(name))?, without_time(&second.join(name))?);
        ensure(a == b, || format!("{} differs between runs", name.to_string_lossy()))?;
    }
    let (again, repeat) = criterion_8();
    again?;
    ensure(repeat.as_deref() == fingerprint && fingerprint.is_some(), || "cross-validation results differ between runs".into())?;
    Ok(format!("{} output files byte-identical apart from Time/sec; cross-validation repeat identical", names.len()))
}

fn main() {
    let start = Instant::now();
    let first = tempfile::tempdir().expect("temp dir");
    let second = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(u32, &str, Outcome)> = vec![
        (1, "IM analytic suite", criterion_1()),
        (2, "response-spectrum resonance and identities", criterion_2()),
        (3, "IM scaling laws", criterion_3()),
        (4, "SVM oracle equivalence", criterion_4()),
        (5, "SVM analytic cases", criterion_5()),
        (6, "kernel trick and Gram matrices", criterion_6()),
        (7, "metric oracles", criterion_7()),
    ];
    let (c8, fingerprint) = criterion_8();
    results.push((8, "CV protocol", c8));
    results.push((9, "end-to-end synth + compare", criterion_9(first.path())));
    results.push((10, "determinism", criterion_10(first.path(), second.path(), fingerprint.as_deref())));
    let elapsed = start.elapsed().as_secs_f64();

    let mut failed = 0;
    for (id, title, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {title}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {title}: {detail}");
            }
        }
    }
    let in_budget = elapsed < 300.0;
    println!(
        "runtime      {}  {elapsed:.1} s total (limit 300 s)",
        if in_budget { "PASS" } else { "FAIL" }
    );
    if failed > 0 || !in_budget {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 10 criteria passed");
}
