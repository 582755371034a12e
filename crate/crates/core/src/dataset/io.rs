use std::path::Path;

use super::{
    DamageClass, DatasetError, Feature, FeatureRow, FeatureTable, Result, CLASS_COLUMN,
    FEATURE_NAMES, MIDR_COLUMN,
};

const TAG_PREFIX: &str = "dataset:";
const MISSING_MARKERS: [&str; 5] = ["", "nan", "na", "null", "none"];

pub fn read_table(path: &Path) -> Result<FeatureTable> {
    read_table_str(&std::fs::read_to_string(path)?)
}

/// Parses a comma-separated table. Leading `#` lines are comments; a comment
/// of the form `# dataset: <tag>` sets the table tag.
pub fn read_table_str(text: &str) -> Result<FeatureTable> {
    let mut tag = String::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(t) = comment.trim().strip_prefix(TAG_PREFIX) {
                tag = t.trim().to_string();
            }
        } else if !trimmed.is_empty() {
            break;
        }
        body_start += line.len();
    }

    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(&text.as_bytes()[body_start..]);
    let header = reader.headers()?.clone();

    let mut feature_cols = [usize::MAX; Feature::COUNT];
    let mut midr_col = None;
    let mut class_col = None;
    for (i, name) in header.iter().enumerate() {
        let slot = if let Some(f) = Feature::from_name(name) {
            &mut feature_cols[f.index()]
        } else if name == MIDR_COLUMN {
            midr_col.get_or_insert(usize::MAX)
        } else if name == CLASS_COLUMN {
            class_col.get_or_insert(usize::MAX)
        } else {
            return Err(DatasetError::UnknownColumn(name.to_string()));
        };
        if *slot != usize::MAX {
            return Err(DatasetError::DuplicateColumn(name.to_string()));
        }
        *slot = i;
    }
    if let Some(f) = feature_cols.iter().position(|&c| c == usize::MAX) {
        return Err(DatasetError::MissingColumn(FEATURE_NAMES[f].to_string()));
    }

    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record?;
        let row = r + 1;
        let cell = |col: usize, name: &str| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            if MISSING_MARKERS.contains(&raw.to_ascii_lowercase().as_str()) {
                return Err(DatasetError::MissingValue {
                    row,
                    column: name.to_string(),
                });
            }
            let v = raw.parse::<f64>().map_err(|_| DatasetError::NonNumeric {
                row,
                column: name.to_string(),
                value: raw.to_string(),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(DatasetError::MissingValue {
                    row,
                    column: name.to_string(),
                })
            }
        };
        let mut values = [0.0; Feature::COUNT];
        for (f, &col) in feature_cols.iter().enumerate() {
            values[f] = cell(col, FEATURE_NAMES[f])?;
        }
        let mut fr = FeatureRow::from_values(values);
        if let Some(col) = midr_col {
            fr.midr = Some(cell(col, MIDR_COLUMN)?);
        }
        if let Some(col) = class_col {
            let raw = record.get(col).unwrap_or("");
            if MISSING_MARKERS.contains(&raw.to_ascii_lowercase().as_str()) {
                return Err(DatasetError::MissingValue {
                    row,
                    column: CLASS_COLUMN.to_string(),
                });
            }
            fr.label = Some(raw.parse::<DamageClass>()?);
        } else if let Some(midr) = fr.midr {
            fr.label = Some(super::classify_damage(midr).map_err(|_| DatasetError::InvalidRow {
                row,
                message: format!("MIDR must be finite and nonnegative, got {midr}"),
            })?);
        }
        rows.push(fr);
    }
    FeatureTable::new(tag, rows)
}

/// Serializes a table; floats use the shortest text that parses back to the
/// identical value.
pub fn write_table_string(table: &FeatureTable) -> String {
    let mut out = String::new();
    if !table.tag().is_empty() {
        out.push_str(&format!("# {TAG_PREFIX} {}\n", table.tag()));
    }
    let mut header: Vec<&str> = FEATURE_NAMES.to_vec();
    if table.has_midr() {
        header.push(MIDR_COLUMN);
    }
    if table.has_labels() {
        header.push(CLASS_COLUMN);
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in table.rows() {
        let mut cells: Vec<String> = row.values().iter().map(|v| format!("{v:?}")).collect();
        if let Some(m) = row.midr() {
            cells.push(format!("{m:?}"));
        }
        if let Some(l) = row.label() {
            cells.push(l.index().to_string());
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_table(table: &FeatureTable, path: &Path) -> Result<()> {
    std::fs::write(path, write_table_string(table))?;
    Ok(())
}
