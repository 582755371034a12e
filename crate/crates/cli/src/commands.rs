use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use seisclass_core::dataset::{
    generate_synthetic, read_table, write_table_string, ClassMix, DamageClass, FeatureRow, FeatureTable,
    StructuralFeatures, CLASS_COLUMN, FEATURE_NAMES, MIDR_COLUMN,
};
use seisclass_core::eval::{
    class_prediction_error, comparison_csv, confusion_csv, cross_validate_table, prediction_error_csv,
    roc_points_csv, ComparisonRow, CvResult,
};
use seisclass_core::models::{read_model, write_model, ModelSpec, SavedModel};
use seisclass_core::preprocess::{apply_minmax, fit_minmax, fit_pca, iqr_flags, pps_matrix, Frame};
use seisclass_core::signal::{compute_intensity_measures, load_accelerogram, SignalError};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::Staged;

/// Result of a command: files to write and a summary for stdout.
pub struct Outcome {
    pub files: Staged,
    pub summary: String,
    pub warnings: Vec<String>,
}

pub fn require_exists(paths: &[&Path]) -> Result<()> {
    match paths.iter().find(|p| !p.exists()) {
        Some(p) => Err(CliError::MissingPath(p.to_path_buf())),
        None => Ok(()),
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn class_summary(table: &FeatureTable) -> String {
    let mut s = format!("rows: {}\n", table.len());
    if table.has_labels() {
        for (class, count) in DamageClass::ALL.iter().zip(table.class_counts()) {
            let _ = writeln!(s, "{class}: {count}");
        }
    }
    s
}

pub fn synth(cfg: &RunConfig, output: &Path) -> Result<Outcome> {
    let mix = ClassMix::new(cfg.synth.mix)?;
    let table = generate_synthetic(cfg.seed, cfg.synth.n, mix)?;
    let mut files = Staged::new();
    files.add(output, write_table_string(&table));
    Ok(Outcome {
        files,
        summary: class_summary(&table),
        warnings: Vec::new(),
    })
}

pub struct ExtractInputs<'a> {
    pub records: &'a [PathBuf],
    pub structural: &'a Path,
    pub midr: Option<&'a Path>,
    pub tag: &'a str,
    pub output: &'a Path,
}

/// Record files named on the command line; directories contribute their
/// regular files in name order.
fn expand_records(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| CliError::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            out.extend(entries);
        } else {
            out.push(p.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("no record files given".into()));
    }
    Ok(out)
}

/// Reads an `id,<columns...>` sidecar into a map keyed by id.
fn read_sidecar(path: &Path, columns: &[&str]) -> Result<BTreeMap<String, Vec<f64>>> {
    let bad = |message: String| CliError::Sidecar {
        path: path.to_path_buf(),
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let position = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name:?}")))
    };
    let id_col = position("id")?;
    let cols: Vec<usize> = columns.iter().map(|c| position(c)).collect::<Result<_>>()?;
    let mut map = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let line = i + 2;
        let id = record.get(id_col).unwrap_or_default().to_string();
        let values = cols
            .iter()
            .zip(columns)
            .map(|(&c, name)| {
                let raw = record.get(c).unwrap_or_default();
                raw.parse::<f64>()
                    .map_err(|_| bad(format!("line {line}: non-numeric {name} {raw:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if map.insert(id.clone(), values).is_some() {
            return Err(bad(format!("duplicate id {id:?}")));
        }
    }
    Ok(map)
}

fn check_alignment(ids: &[String], sidecar: &BTreeMap<String, Vec<f64>>, what: &str) -> Result<()> {
    if let Some(id) = ids.iter().find(|id| !sidecar.contains_key(*id)) {
        return Err(CliError::Alignment(format!("record id {id:?} missing from {what} sidecar")));
    }
    let known: HashSet<&String> = ids.iter().collect();
    if let Some(id) = sidecar.keys().find(|id| !known.contains(id)) {
        return Err(CliError::Alignment(format!("{what} sidecar id {id:?} has no record")));
    }
    Ok(())
}

pub fn extract(cfg: &RunConfig, inputs: &ExtractInputs<'_>) -> Result<Outcome> {
    let mut required: Vec<&Path> = inputs.records.iter().map(PathBuf::as_path).collect();
    required.push(inputs.structural);
    required.extend(inputs.midr);
    require_exists(&required)?;
    let im_cfg = cfg.im_config()?;
    let (format, unit) = cfg.record_format()?;

    let paths = expand_records(inputs.records)?;
    let ids: Vec<String> = paths
        .iter()
        .map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    let mut seen = HashSet::new();
    if let Some(id) = ids.iter().find(|id| !seen.insert(id.as_str())) {
        return Err(CliError::Alignment(format!("record id {id:?} appears twice")));
    }
    let structural = read_sidecar(inputs.structural, &["Htot", "nvx", "nvy", "e0"])?;
    check_alignment(&ids, &structural, "structural")?;
    let midr = inputs.midr.map(|p| read_sidecar(p, &["MIDR"])).transpose()?;
    if let Some(m) = &midr {
        check_alignment(&ids, m, "MIDR")?;
    }

    let measured: Vec<std::result::Result<_, CliError>> = pool(cfg.workers)?.install(|| {
        paths
            .par_iter()
            .map(|path| {
                let record = |source| CliError::Record {
                    path: path.clone(),
                    source,
                };
                let acc = load_accelerogram(path, format, unit).map_err(record)?;
                match compute_intensity_measures(&acc, &im_cfg) {
                    Ok(im) => Ok((im, None)),
                    Err(SignalError::UndefinedRatio { id, measures }) => {
                        Ok((*measures, Some(format!("record {id}: zero PGA; ratio and durations set to 0"))))
                    }
                    Err(e) => Err(record(e)),
                }
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(paths.len());
    let mut warnings = Vec::new();
    for (id, result) in ids.iter().zip(measured) {
        let (im, warning) = result?;
        warnings.extend(warning);
        let s = &structural[id];
        let features = StructuralFeatures {
            h_tot: s[0],
            n_vx: s[1],
            n_vy: s[2],
            e_0: s[3],
        };
        let mut row = FeatureRow::new(features, &im);
        if let Some(m) = &midr {
            row = row.with_midr(m[id][0])?;
        }
        rows.push(row);
    }
    let table = FeatureTable::new(inputs.tag, rows)?;
    let mut files = Staged::new();
    files.add(inputs.output, write_table_string(&table));
    Ok(Outcome {
        files,
        summary: class_summary(&table),
        warnings,
    })
}

fn load_table(path: &Path) -> Result<FeatureTable> {
    require_exists(&[path])?;
    Ok(read_table(path)?)
}

pub fn preprocess(cfg: &RunConfig, table_path: &Path) -> Result<Outcome> {
    let table = load_table(table_path)?;
    let out = &cfg.out_dir;
    let p = &cfg.preprocess;
    let frame = Frame::from_table(&table, false);
    let norm = fit_minmax(&frame, (p.range[0], p.range[1]))?;
    let scaled = apply_minmax(&norm, &frame)?;
    let mut files = Staged::new();

    let mut s = String::from("feature,min,max,degenerate\n");
    for (j, name) in norm.names().iter().enumerate() {
        let _ = writeln!(s, "{name},{},{},{}", norm.mins()[j], norm.maxs()[j], norm.is_constant(j));
    }
    files.add(out.join("normalization.csv"), s);

    let outliers = iqr_flags(&frame)?;
    let mut summary = String::from("feature,q1,q3,iqr,lower_fence,upper_fence,flagged\n");
    let mut rows = String::from("row,feature,value\n");
    for (j, col) in outliers.columns.iter().enumerate() {
        let _ = writeln!(
            summary,
            "{},{},{},{},{},{},{}",
            col.name,
            col.q1,
            col.q3,
            col.iqr,
            col.lower_fence,
            col.upper_fence,
            col.flagged()
        );
        for (i, _) in col.flags.iter().enumerate().filter(|(_, f)| **f) {
            let _ = writeln!(rows, "{},{},{}", i + 1, col.name, frame.rows()[i][j]);
        }
    }
    files.add(out.join("outliers.csv"), summary);
    files.add(out.join("outlier_rows.csv"), rows);

    let pca = fit_pca(if p.pca_normalized { &scaled } else { &frame })?;
    let mut scree = String::from("component,eigenvalue,ratio,cumulative\n");
    let mut cumulative = 0.0;
    for (k, (ev, ratio)) in pca.eigenvalues().iter().zip(pca.explained_variance_ratio()).enumerate() {
        cumulative += ratio;
        let _ = writeln!(scree, "{},{ev},{ratio},{cumulative}", k + 1);
    }
    files.add(out.join("scree.csv"), scree);

    let pps = pps_matrix(&Frame::from_table(&table, true), p.pps_folds, cfg.seed)?;
    let mut s = String::from("predictor,target,score,metric,model_metric,baseline_metric,degenerate\n");
    for (i, predictor) in pps.names.iter().enumerate() {
        for (j, target) in pps.names.iter().enumerate() {
            let c = &pps.cells[i][j];
            let _ = writeln!(
                s,
                "{predictor},{target},{},{},{},{},{}",
                c.score,
                c.metric.name(),
                c.model_metric,
                c.baseline_metric,
                c.degenerate
            );
        }
    }
    files.add(out.join("pps.csv"), s);

    if p.write_normalized {
        files.add(out.join("normalized.csv"), normalized_csv(&table, &scaled));
    }

    let degenerate = (0..norm.names().len()).filter(|&j| norm.is_constant(j)).count();
    let summary = format!(
        "rows: {}\ndegenerate features: {degenerate}\nflagged values: {}\n",
        table.len(),
        outliers.columns.iter().map(|c| c.flagged()).sum::<usize>()
    );
    Ok(Outcome {
        files,
        summary,
        warnings: Vec::new(),
    })
}

/// The table with scaled features, same columns. Scaled values may leave the
/// physical ranges a feature table enforces, so this is plain CSV.
fn normalized_csv(table: &FeatureTable, scaled: &Frame) -> String {
    let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
    if table.has_midr() {
        header.push(MIDR_COLUMN);
    }
    if table.has_labels() {
        header.push(CLASS_COLUMN);
    }
    let mut s = header.join(",");
    s.push('\n');
    for (values, row) in scaled.rows().iter().zip(table.rows()) {
        let mut cells: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        cells.extend(row.midr().map(|m| format!("{m:?}")));
        cells.extend(row.label().map(|l| l.index().to_string()));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn labels_of(table: &FeatureTable) -> Result<Vec<usize>> {
    Ok(table
        .labels()
        .ok_or(seisclass_core::eval::EvalError::Unlabeled)?
        .iter()
        .map(|c| c.index())
        .collect())
}

pub fn train(cfg: &RunConfig, table_path: &Path, model: &str, output: &Path) -> Result<Outcome> {
    let spec = cfg.model_spec(model)?;
    if spec.svm_params().is_none() {
        return Err(CliError::Config(format!("only SVM models can be saved, got {model:?}")));
    }
    let table = load_table(table_path)?;
    let y = labels_of(&table)?;
    let frame = Frame::from_table(&table, false);
    let normalization = if cfg.cv.normalize {
        Some(fit_minmax(&frame, (cfg.cv.range[0], cfg.cv.range[1]))?)
    } else {
        None
    };
    let x = match &normalization {
        Some(n) => apply_minmax(n, &frame)?.into_rows(),
        None => frame.into_rows(),
    };
    let fitted = spec.fit(&x, &y, DamageClass::COUNT)?;
    let svm = fitted.as_svm().expect("svm spec yields an svm").clone();
    let correct = x
        .iter()
        .zip(&y)
        .map(|(row, &label)| svm.predict(row).map(|p| p == label))
        .collect::<std::result::Result<Vec<bool>, _>>()?
        .into_iter()
        .filter(|ok| *ok)
        .count();
    let support: usize = svm.machines().iter().map(|m| m.svm.support_vectors().len()).sum();
    let saved = SavedModel { normalization, svm };
    let mut files = Staged::new();
    files.add(output, write_model(&saved));
    let summary = format!(
        "model: {}\nkernel: {}\nmachines: {}\nsupport vectors: {support}\ntraining accuracy: {:.4}\n",
        spec.name(),
        saved.svm.kernel(),
        saved.svm.machines().len(),
        correct as f64 / y.len() as f64
    );
    Ok(Outcome {
        files,
        summary,
        warnings: fitted.notes().to_vec(),
    })
}

pub fn predict(model_path: &Path, table_path: &Path, output: &Path) -> Result<Outcome> {
    require_exists(&[model_path, table_path])?;
    let text = std::fs::read_to_string(model_path).map_err(|e| CliError::io(model_path, e))?;
    let model = read_model(&text)?;
    let table = load_table(table_path)?;
    let truth = table.labels();
    let mut s = String::from(if truth.is_some() { "row,predicted,true\n" } else { "row,predicted\n" });
    let mut correct = 0usize;
    for (i, row) in table.rows().iter().enumerate() {
        let class = DamageClass::from_index(model.predict(row.values())?).expect("model classes are damage classes");
        match &truth {
            Some(t) => {
                correct += usize::from(t[i] == class);
                let _ = writeln!(s, "{},{class},{}", i + 1, t[i]);
            }
            None => {
                let _ = writeln!(s, "{},{class}", i + 1);
            }
        }
    }
    let mut summary = format!("rows: {}\n", table.len());
    if truth.is_some() {
        let _ = writeln!(summary, "accuracy: {:.4}", correct as f64 / table.len() as f64);
    }
    let mut files = Staged::new();
    files.add(output, s);
    Ok(Outcome {
        files,
        summary,
        warnings: Vec::new(),
    })
}

fn folds_csv(result: &CvResult) -> String {
    let mut s = String::from("fold,train_size,test_size,accuracy,skipped\n");
    for f in &result.folds {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            f.fold + 1,
            f.train_size,
            f.test_size,
            f.accuracy.map_or(String::new(), |a| a.to_string()),
            f.skipped.as_deref().unwrap_or("")
        );
    }
    s
}

/// Merges flags that differ only in their `fold N: ` prefix.
fn collapse_flags(flags: &[String]) -> Vec<String> {
    let mut counts: Vec<(String, usize)> = Vec::new();
    for flag in flags {
        let message = flag
            .strip_prefix("fold ")
            .and_then(|rest| rest.split_once(": "))
            .filter(|(n, _)| n.parse::<usize>().is_ok())
            .map_or(flag.as_str(), |(_, m)| m);
        match counts.iter_mut().find(|(m, _)| m == message) {
            Some((_, n)) => *n += 1,
            None => counts.push((message.to_string(), 1)),
        }
    }
    counts
        .into_iter()
        .map(|(m, n)| if n > 1 { format!("{m} ({n} folds)") } else { m })
        .collect()
}

pub fn compare(cfg: &RunConfig, table_path: &Path) -> Result<Outcome> {
    let specs: Vec<ModelSpec> = cfg.model_specs()?;
    let cv = cfg.cv_config()?;
    let table = load_table(table_path)?;
    if !table.has_labels() {
        return Err(seisclass_core::eval::EvalError::Unlabeled.into());
    }
    let out = &cfg.out_dir;
    let mut files = Staged::new();
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for spec in &specs {
        let result = cross_validate_table(&table, spec, &cv)?;
        let id = spec.id();
        let labels = result.confusion.labels().to_vec();
        files.add(out.join(format!("{id}_confusion.csv")), confusion_csv(&result.confusion));
        files.add(
            out.join(format!("{id}_prediction_error.csv")),
            prediction_error_csv(&class_prediction_error(&result.confusion), &labels),
        );
        files.add(out.join(format!("{id}_roc.csv")), roc_points_csv(&labels, &result.roc_curves));
        files.add(out.join(format!("{id}_folds.csv")), folds_csv(&result));
        warnings.extend(collapse_flags(&result.flags).into_iter().map(|f| format!("{}: {f}", spec.name())));
        rows.push(ComparisonRow {
            id: id.to_string(),
            model: spec.display_name().to_string(),
            metrics: result.metrics,
        });
    }
    let report = comparison_csv(&rows);
    files.add(out.join("comparison.csv"), report.clone());
    Ok(Outcome {
        files,
        summary: report,
        warnings,
    })
}
