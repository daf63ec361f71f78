//! Text formats: dense matrices, trace CSV and `key=value` files.
//!
//! Matrix files hold a `rows cols` header followed by `rows` lines of
//! whitespace-separated numbers; blank lines and `#` comments are ignored.
//! Vectors are stored as single-column matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use growthrates_core::solvers::{Status, Trace, TraceRecord};
use growthrates_core::{DenseMatrix, DenseVector};

use crate::error::{CliError, Result};

pub const TRACE_HEADER: &str = "k,f_gap,dist_sq,grad_map_norm,restart";

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::io(path, source))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::io(dir, source))?;
    }
    fs::write(path, text).map_err(|source| CliError::io(path, source))
}

/// Content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_f64(path: &Path, line: usize, token: &str) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| CliError::parse(path, line, format!("not a number: {token:?}")))?;
    if !v.is_finite() {
        return Err(CliError::parse(path, line, format!("non-finite value {token:?}")));
    }
    Ok(v)
}

pub fn parse_matrix(path: &Path, text: &str) -> Result<DenseMatrix> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| CliError::parse(path, 1, "missing `rows cols` header"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::parse(path, hline, "header must be two nonnegative integers"))?;
    let [rows, cols] = dims[..] else {
        return Err(CliError::parse(path, hline, "header must be two nonnegative integers"));
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (line, content) in lines {
        if seen == rows {
            return Err(CliError::parse(path, line, format!("more than {rows} rows")));
        }
        let before = data.len();
        for token in content.split_whitespace() {
            data.push(parse_f64(path, line, token)?);
        }
        if data.len() - before != cols {
            return Err(CliError::parse(
                path,
                line,
                format!("expected {cols} entries, found {}", data.len() - before),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(CliError::parse(path, text.lines().count().max(1), format!("expected {rows} rows, found {seen}")));
    }
    DenseMatrix::new(rows, cols, data).map_err(|e| CliError::parse(path, hline, e.to_string()))
}

pub fn format_matrix(a: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a.row(i).iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(path, &read_text(path)?)
}

pub fn write_matrix(path: &Path, a: &DenseMatrix) -> Result<()> {
    write_text(path, &format_matrix(a))
}

pub fn read_vector(path: &Path) -> Result<DenseVector> {
    let a = read_matrix(path)?;
    if a.cols() != 1 {
        return Err(CliError::parse(path, 1, format!("a vector file needs one column, found {}", a.cols())));
    }
    DenseVector::new(a.data().to_vec()).map_err(|e| CliError::parse(path, 1, e.to_string()))
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let a = DenseMatrix::new(v.len(), 1, v.to_vec())?;
    write_matrix(path, &a)
}

fn optional_cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

/// Trace CSV; absent columns are written as empty cells.
pub fn format_trace(records: &[TraceRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{:.16e},{}",
            r.k,
            optional_cell(r.f_gap),
            optional_cell(r.dist_sq),
            r.grad_map_norm,
            u8::from(r.restart)
        );
    }
    out
}

pub fn parse_trace(path: &Path, text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRACE_HEADER => {}
        _ => return Err(CliError::parse(path, 1, format!("expected header `{TRACE_HEADER}`"))),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != 5 {
            return Err(CliError::parse(path, line_no, format!("expected 5 fields, found {}", cells.len())));
        }
        let k = cells[0]
            .parse()
            .map_err(|_| CliError::parse(path, line_no, format!("bad iteration index {:?}", cells[0])))?;
        let opt = |cell: &str| -> Result<Option<f64>> {
            if cell.is_empty() {
                Ok(None)
            } else {
                parse_f64(path, line_no, cell).map(Some)
            }
        };
        let restart = match cells[4] {
            "0" | "false" => false,
            "1" | "true" => true,
            other => return Err(CliError::parse(path, line_no, format!("bad restart flag {other:?}"))),
        };
        records.push(TraceRecord {
            k,
            f_gap: opt(cells[1])?,
            dist_sq: opt(cells[2])?,
            grad_map_norm: parse_f64(path, line_no, cells[3])?,
            restart,
        });
    }
    if records.is_empty() {
        return Err(CliError::parse(path, 1, "trace has no records"));
    }
    Ok(records)
}

/// Reads a trace for rate checking. The final point is not stored in the
/// CSV, so the returned trace carries an empty one.
pub fn read_trace(path: &Path) -> Result<Trace> {
    let records = parse_trace(path, &read_text(path)?)?;
    Ok(Trace {
        records,
        status: Status::MaxIters,
        final_point: DenseVector::zeros(0),
        rate_guaranteed: true,
    })
}

pub fn write_trace(path: &Path, trace: &Trace) -> Result<()> {
    write_text(path, &format_trace(&trace.records))
}

pub fn format_key_values<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> String {
    pairs.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}

pub fn parse_key_values(path: &Path, text: &str) -> Result<BTreeMap<String, (usize, String)>> {
    let mut out = BTreeMap::new();
    for (line, content) in content_lines(text) {
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::parse(path, line, "expected `key=value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::parse(path, line, "empty key"));
        }
        if out.insert(key.to_string(), (line, value.trim().to_string())).is_some() {
            return Err(CliError::parse(path, line, format!("duplicate key `{key}`")));
        }
    }
    Ok(out)
}
