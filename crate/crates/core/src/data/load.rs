use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{Column, ColumnKind, DataError, Dataset};

/// Load `outcome_name` and `covariate_names` from a comma-separated file
/// with a header row. Unlisted columns are dropped.
///
/// A column without a hint is continuous when every cell parses as a finite
/// number and categorical otherwise. Empty cells, `NA` and `NaN` are
/// rejected as missing values.
pub fn load_csv(
    path: impl AsRef<Path>,
    outcome_name: &str,
    covariate_names: &[String],
    kinds: &HashMap<String, ColumnKind>,
) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, outcome_name, covariate_names, kinds)
}

/// [`load_csv`] over any reader.
pub fn read_csv<R: Read>(
    reader: R,
    outcome_name: &str,
    covariate_names: &[String],
    kinds: &HashMap<String, ColumnKind>,
) -> Result<Dataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();

    let wanted: Vec<&str> = std::iter::once(outcome_name)
        .chain(covariate_names.iter().map(String::as_str))
        .collect();
    let mut positions = Vec::with_capacity(wanted.len());
    for name in &wanted {
        let pos = headers
            .iter()
            .position(|h| h == *name)
            .ok_or_else(|| DataError::MissingColumn(name.to_string()))?;
        positions.push(pos);
    }

    let mut cells: Vec<Vec<String>> = vec![Vec::new(); wanted.len()];
    let mut lines: Vec<u64> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        for (slot, &pos) in cells.iter_mut().zip(&positions) {
            slot.push(record[pos].to_string());
        }
        lines.push(line);
    }

    let mut columns = Vec::with_capacity(wanted.len());
    for (name, raw) in wanted.iter().zip(cells) {
        columns.push(build_column(name, raw, &lines, kinds.get(*name).copied())?);
    }
    let mut columns = columns.into_iter();
    let outcome = columns.next().expect("outcome column");
    Dataset::new(outcome, columns.collect())
}

fn csv_error(err: csv::Error) -> DataError {
    match err.kind() {
        csv::ErrorKind::UnequalLengths {
            pos,
            expected_len,
            len,
        } => DataError::FieldCount {
            line: pos.as_ref().map(|p| p.line()).unwrap_or(0),
            expected: *expected_len as usize,
            found: *len as usize,
        },
        _ => DataError::Csv(err.to_string()),
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "NA" || cell.eq_ignore_ascii_case("nan")
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn build_column(
    name: &str,
    raw: Vec<String>,
    lines: &[u64],
    hint: Option<ColumnKind>,
) -> Result<Column, DataError> {
    if let Some(i) = raw.iter().position(|c| is_missing(c)) {
        return Err(DataError::MissingValue {
            column: name.to_string(),
            line: lines[i],
        });
    }
    let kind = hint.unwrap_or_else(|| {
        if raw.iter().all(|c| parse_finite(c).is_some()) {
            ColumnKind::Continuous
        } else {
            ColumnKind::Categorical
        }
    });
    match kind {
        ColumnKind::Continuous => {
            let mut values = Vec::with_capacity(raw.len());
            for (cell, &line) in raw.iter().zip(lines) {
                let v = parse_finite(cell).ok_or_else(|| DataError::Unparseable {
                    column: name.to_string(),
                    line,
                    value: cell.clone(),
                })?;
                values.push(v);
            }
            Column::continuous(name, values)
        }
        ColumnKind::Categorical => {
            let mut labels: Vec<String> = raw.clone();
            labels.sort();
            labels.dedup();
            sort_labels(&mut labels);
            let codes = raw
                .iter()
                .map(|c| labels.iter().position(|l| l == c).expect("label present"))
                .collect();
            Column::categorical(name, codes, labels)
        }
    }
}

/// Interval labels such as `(1561,1908]` sort by their endpoints, purely
/// numeric labels numerically, anything else lexicographically.
fn sort_labels(labels: &mut [String]) {
    if let Some(keys) = labels
        .iter()
        .map(|l| interval_key(l))
        .collect::<Option<Vec<_>>>()
    {
        let mut keyed: Vec<_> = keys.into_iter().zip(labels.iter().cloned()).collect();
        keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite keys"));
        for (slot, (_, label)) in labels.iter_mut().zip(keyed) {
            *slot = label;
        }
    } else if labels.iter().all(|l| parse_finite(l).is_some()) {
        labels.sort_by(|a, b| {
            parse_finite(a)
                .unwrap()
                .partial_cmp(&parse_finite(b).unwrap())
                .expect("finite")
        });
    }
}

fn interval_key(label: &str) -> Option<(f64, f64)> {
    let inner = label.strip_prefix(['(', '['])?.strip_suffix([')', ']'])?;
    let (a, b) = inner.split_once(',')?;
    Some((parse_finite(a.trim())?, parse_finite(b.trim())?))
}
