//! CSV ingestion into a [`DataMatrix`].

use std::path::{Path, PathBuf};

use depthkit::DataMatrix;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Keep only rows whose `column` cell equals `value` (after trimming).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filter {
    pub column: String,
    pub value: String,
}

impl Filter {
    /// Parses `col=val`.
    pub fn parse(text: &str) -> CliResult<Self> {
        match text.split_once('=') {
            Some((c, v)) if !c.trim().is_empty() => Ok(Self {
                column: c.trim().to_string(),
                value: v.trim().to_string(),
            }),
            _ => Err(CliError::Input(format!("filter must look like col=val, got {text:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Dataset {
    #[serde(skip)]
    pub matrix: DataMatrix,
    pub source_path: PathBuf,
    /// Rows passing the filter but incomplete in the selected columns.
    pub dropped_rows: usize,
    pub selected_columns: Vec<String>,
    pub filter: Option<Filter>,
}

fn column_index(headers: &csv::StringRecord, name: &str) -> CliResult<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| CliError::MissingColumn(name.to_string()))
}

/// Reads the selected numeric columns of a headed, comma-separated file.
///
/// Rows failing `filter` are skipped silently; rows passing it with an empty
/// or unparseable cell in any selected column are dropped and counted.
pub fn ingest_csv(
    path: &Path,
    columns: &[String],
    filter: Option<&Filter>,
    id_column: Option<&str>,
) -> CliResult<Dataset> {
    if !path.is_file() {
        return Err(CliError::MissingFile(path.to_path_buf()));
    }
    if columns.is_empty() {
        return Err(CliError::Input("no columns selected".into()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Input(e.to_string()))?
        .clone();
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| column_index(&headers, c))
        .collect::<CliResult<_>>()?;
    let filter_idx = filter.map(|f| column_index(&headers, &f.column)).transpose()?;
    let id_idx = id_column.map(|c| column_index(&headers, c)).transpose()?;

    let mut values = Vec::new();
    let mut ids = Vec::new();
    let mut dropped = 0;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Input(e.to_string()))?;
        if let (Some(f), Some(i)) = (filter, filter_idx) {
            if record.get(i).map(str::trim) != Some(f.value.as_str()) {
                continue;
            }
        }
        let row: Option<Vec<f64>> = idx
            .iter()
            .map(|&i| {
                record
                    .get(i)
                    .and_then(|cell| cell.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite())
            })
            .collect();
        match row {
            Some(row) => {
                values.extend(row);
                if let Some(i) = id_idx {
                    ids.push(record.get(i).unwrap_or("").trim().to_string());
                }
            }
            None => dropped += 1,
        }
    }
    let n = values.len() / columns.len();
    if n == 0 {
        return Err(CliError::NoRows);
    }
    let name = match filter {
        Some(f) => format!("{}={}", f.column, f.value),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sample".into()),
    };
    let mut matrix = DataMatrix::new(values, n, columns.len())
        .and_then(|m| m.with_column_names(columns.iter().cloned()))
        .map_err(|e| CliError::Input(e.to_string()))?
        .with_name(name);
    if id_idx.is_some() {
        matrix = matrix
            .with_row_ids(ids)
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    Ok(Dataset {
        matrix,
        source_path: path.to_path_buf(),
        dropped_rows: dropped,
        selected_columns: columns.to_vec(),
        filter: filter.cloned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn cols(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn incomplete_rows_are_dropped() {
        let f = file("country,year,Y1,Y2,Y3\nA,1990,1,2,3\nB,1990,4,5,\nC,1990,7,8,9\n");
        let ds = ingest_csv(f.path(), &cols(&["Y1", "Y3"]), None, Some("country")).unwrap();
        assert_eq!(ds.matrix.nrows(), 2);
        assert_eq!(ds.dropped_rows, 1);
        assert_eq!(ds.matrix.values(), &[1.0, 3.0, 7.0, 9.0]);
        assert_eq!(ds.matrix.row_ids(), &["A".to_string(), "C".to_string()]);
    }

    #[test]
    fn filter_keeps_one_year() {
        let f = file("country,year,Y1\nA,1990,1\nA,2000,2\nB,1990,3\nB,2000,x\n");
        let filter = Filter::parse("year=1990").unwrap();
        let ds = ingest_csv(f.path(), &cols(&["Y1"]), Some(&filter), None).unwrap();
        assert_eq!(ds.matrix.values(), &[1.0, 3.0]);
        assert_eq!(ds.dropped_rows, 0);
    }

    #[test]
    fn distinct_errors() {
        let f = file("country,year,Y1\n");
        assert!(matches!(ingest_csv(f.path(), &cols(&["Y1"]), None, None), Err(CliError::NoRows)));
        assert!(matches!(
            ingest_csv(f.path(), &cols(&["Y9"]), None, None),
            Err(CliError::MissingColumn(c)) if c == "Y9"
        ));
        assert!(matches!(
            ingest_csv(Path::new("/no/such/file.csv"), &cols(&["Y1"]), None, None),
            Err(CliError::MissingFile(_))
        ));
        assert!(Filter::parse("year").is_err());
    }
}
