//! Matrix Market `array` files with complex (or real) entries, column-major.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Result, WinvError};
use crate::exact::{parse_decimal, ExactMatrix, GaussRational};
use crate::matrix::{Matrix, C64};

pub const HEADER: &str = "%%MatrixMarket matrix array complex general";

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
}

/// Column-major entries as raw tokens, with the line each came from.
struct Raw {
    rows: usize,
    cols: usize,
    values: Vec<(usize, Vec<String>)>,
}

fn parse_error(path: &Path, line: usize, msg: impl Into<String>) -> WinvError {
    WinvError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_raw(text: &str, path: &Path) -> Result<Raw> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(path, 1, "empty file"))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    let field = match words.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["%%matrixmarket", "matrix", "array", "complex", "general"] => Field::Complex,
        ["%%matrixmarket", "matrix", "array", "real", "general"] => Field::Real,
        _ => {
            return Err(parse_error(
                path,
                1,
                format!("expected `{HEADER}`, found `{header}`"),
            ))
        }
    };
    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_error(path, 2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_error(path, size_line, format!("bad size line `{size}`")))?;
    let [rows, cols] = dims[..] else {
        return Err(parse_error(path, size_line, "size line must hold two integers"));
    };
    let width = if field == Field::Complex { 2 } else { 1 };
    let mut values = Vec::with_capacity(rows * cols);
    let mut last_line = size_line;
    for (line, text) in body {
        last_line = line;
        let tokens: Vec<String> = text.split_whitespace().map(String::from).collect();
        if tokens.len() != width {
            return Err(parse_error(
                path,
                line,
                format!("expected {width} value(s), found {}", tokens.len()),
            ));
        }
        if values.len() == rows * cols {
            return Err(parse_error(
                path,
                line,
                format!("more than the declared {rows}x{cols} values"),
            ));
        }
        values.push((line, tokens));
    }
    if values.len() != rows * cols {
        return Err(parse_error(
            path,
            last_line + 1,
            format!("declared {rows}x{cols} = {} values, found {}", rows * cols, values.len()),
        ));
    }
    Ok(Raw { rows, cols, values })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| WinvError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses Matrix Market text; `path` only labels errors.
pub fn parse_matrix_str(text: &str, path: &Path) -> Result<Matrix> {
    let raw = parse_raw(text, path)?;
    let mut entries = vec![C64::new(0.0, 0.0); raw.rows * raw.cols];
    for (idx, (line, tokens)) in raw.values.iter().enumerate() {
        let mut parts = [0.0; 2];
        for (slot, tok) in parts.iter_mut().zip(tokens) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_error(path, *line, format!("bad value `{tok}`")))?;
        }
        let (i, j) = (idx % raw.rows, idx / raw.rows);
        entries[i * raw.cols + j] = C64::new(parts[0], parts[1]);
    }
    Matrix::from_row_slice(raw.rows, raw.cols, &entries)
}

pub fn parse_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    parse_matrix_str(&read(path)?, path)
}

/// Parses decimal literals exactly; `0.1` becomes `1/10`.
pub fn parse_exact_matrix_str(text: &str, path: &Path) -> Result<ExactMatrix> {
    let raw = parse_raw(text, path)?;
    let zero = || Complex::new(BigRational::zero(), BigRational::zero());
    let mut entries: Vec<GaussRational> = vec![zero(); raw.rows * raw.cols];
    for (idx, (line, tokens)) in raw.values.iter().enumerate() {
        let mut parts = tokens.iter().map(|tok| {
            parse_decimal(tok).ok_or_else(|| parse_error(path, *line, format!("bad value `{tok}`")))
        });
        let re = parts.next().expect("at least one token")?;
        let im = parts.next().transpose()?.unwrap_or_else(BigRational::zero);
        let (i, j) = (idx % raw.rows, idx / raw.rows);
        entries[i * raw.cols + j] = Complex::new(re, im);
    }
    ExactMatrix::from_entries(raw.rows, raw.cols, entries)
}

pub fn parse_exact_matrix(path: impl AsRef<Path>) -> Result<ExactMatrix> {
    let path = path.as_ref();
    parse_exact_matrix_str(&read(path)?, path)
}

/// Shortest round-trip decimal for every component.
pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{HEADER}\n{} {}\n", m.rows(), m.cols());
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m.get(i, j);
            writeln!(out, "{:?} {:?}", z.re, z.im).expect("string write");
        }
    }
    out
}

pub fn write_matrix(m: &Matrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|source| WinvError::Io {
        path: PathBuf::from(path),
        source,
    })
}
