//! Matrix and vector file formats.
//!
//! Matrices: CSV with `n` lines of `n` comma-separated decimals, or JSON
//! `{"n": n, "rows": [[...], ...]}`. Vectors: a single CSV line, or a JSON
//! array. The format follows the file extension; anything other than
//! `.json` is read as CSV.

use std::fs;
use std::path::Path;

use serde_json::Value;

use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn of(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// I/O or parse failure, reported with exit status 3.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct FileError {
    pub path: String,
    pub message: String,
}

impl FileError {
    fn new(path: &Path, message: impl Into<String>) -> Self {
        Self {
            path: path.display().to_string(),
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, FileError> {
    fs::read_to_string(path).map_err(|e| FileError::new(path, e.to_string()))
}

fn parse_number(path: &Path, field: &str) -> Result<f64, FileError> {
    let x: f64 = field
        .trim()
        .parse()
        .map_err(|_| FileError::new(path, format!("not a number: {field:?}")))?;
    if !x.is_finite() {
        return Err(FileError::new(
            path,
            format!("not a finite number: {field:?}"),
        ));
    }
    Ok(x)
}

fn csv_records(path: &Path, text: &str) -> Result<Vec<Vec<f64>>, FileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| FileError::new(path, e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        rows.push(
            record
                .iter()
                .map(|f| parse_number(path, f))
                .collect::<Result<_, _>>()?,
        );
    }
    Ok(rows)
}

fn json_numbers(path: &Path, value: &Value) -> Result<Vec<f64>, FileError> {
    let items = value
        .as_array()
        .ok_or_else(|| FileError::new(path, "expected an array of numbers"))?;
    items
        .iter()
        .map(|v| {
            v.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| FileError::new(path, format!("not a finite number: {v}")))
        })
        .collect()
}

pub fn read_matrix(path: &Path) -> Result<Matrix, FileError> {
    let text = read(path)?;
    let rows = match Format::of(path) {
        Format::Csv => csv_records(path, &text)?,
        Format::Json => {
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| FileError::new(path, e.to_string()))?;
            let n = doc
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| FileError::new(path, "missing integer field \"n\""))?;
            let rows = doc
                .get("rows")
                .and_then(Value::as_array)
                .ok_or_else(|| FileError::new(path, "missing array field \"rows\""))?;
            if rows.len() as u64 != n {
                return Err(FileError::new(
                    path,
                    format!("\"n\" is {n} but {} rows given", rows.len()),
                ));
            }
            rows.iter()
                .map(|r| json_numbers(path, r))
                .collect::<Result<_, _>>()?
        }
    };
    if rows.is_empty() {
        return Err(FileError::new(path, "empty matrix"));
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != rows.len()) {
        return Err(FileError::new(
            path,
            format!(
                "row {} has {} entries, expected {}",
                bad + 1,
                rows[bad].len(),
                rows.len()
            ),
        ));
    }
    Matrix::from_rows(&rows).map_err(|e| FileError::new(path, e.to_string()))
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>, FileError> {
    let text = read(path)?;
    let values = match Format::of(path) {
        Format::Csv => {
            let mut records = csv_records(path, &text)?;
            if records.len() != 1 {
                return Err(FileError::new(path, "expected a single line of values"));
            }
            records.pop().unwrap()
        }
        Format::Json => {
            let doc: Value =
                serde_json::from_str(&text).map_err(|e| FileError::new(path, e.to_string()))?;
            json_numbers(path, &doc)?
        }
    };
    if values.is_empty() {
        return Err(FileError::new(path, "empty vector"));
    }
    Ok(values)
}

/// Serializes a matrix in the format implied by `path`. Numbers use the
/// shortest representation that parses back to the same value.
pub fn matrix_text(m: &Matrix, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for row in m.rows() {
                let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({ "n": m.dim(), "rows": m.to_rows() });
            let mut s = serde_json::to_string(&doc).expect("finite matrix serializes");
            s.push('\n');
            s
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), FileError> {
    fs::write(path, contents).map_err(|e| FileError::new(path, e.to_string()))
}
