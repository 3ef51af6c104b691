//! Plain-text matrix files.
//!
//! The first line is `rows cols field`, followed by the entries in row-major
//! order separated by whitespace (one matrix row per line when written).
//! Complex entries are written `a+bi` or `a-bi` without spaces. Values are
//! printed with 17 significant digits, which round-trips every finite `f64`.

use std::fmt::Write as _;

use bruckloop::{Complex64, Field, Matrix, Scalar};

use crate::CliError;

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn entry<T: Scalar>(x: T) -> String {
    match T::FIELD {
        Field::Real => real(x.re()),
        Field::Complex => {
            let im = x.im();
            let sign = if im.is_sign_negative() { '-' } else { '+' };
            format!("{}{sign}{}i", real(x.re()), real(im.abs()))
        }
    }
}

pub fn format_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {} {}\n", m.rows(), m.cols(), T::FIELD.name());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| entry(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    s.parse::<f64>()
        .map_err(|_| CliError::Parse(format!("bad number `{s}`")))
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(token: &str) -> Result<Complex64, CliError> {
    let Some(body) = token.strip_suffix('i') else {
        return Ok(Complex64::new(parse_f64(token)?, 0.0));
    };
    // the split is the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = parse_f64(&body[..k])?;
            let im = parse_f64(&body[k..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, parse_f64(body)?)),
    }
}

/// Field named in the header of a matrix file.
pub fn header_field(text: &str) -> Result<Field, CliError> {
    let header = text
        .lines()
        .next()
        .ok_or_else(|| CliError::Parse("empty matrix file".into()))?;
    let field = header
        .split_whitespace()
        .nth(2)
        .ok_or_else(|| CliError::Parse("header must be `rows cols field`".into()))?;
    field
        .parse()
        .map_err(|_| CliError::Parse(format!("unknown field `{field}`")))
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>, CliError> {
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| CliError::Parse(format!("missing {what}")))
    };
    let rows: usize = next("row count")?
        .parse()
        .map_err(|_| CliError::Parse("bad row count".into()))?;
    let cols: usize = next("column count")?
        .parse()
        .map_err(|_| CliError::Parse("bad column count".into()))?;
    let field: Field = next("field")?
        .parse()
        .map_err(|_| CliError::Parse("unknown field".into()))?;
    if field != T::FIELD {
        return Err(CliError::Parse(format!(
            "matrix is over {}, expected {}",
            field.name(),
            T::FIELD.name()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        let tok = next(&format!("entry {k}"))?;
        let z = parse_complex(tok)?;
        if T::FIELD == Field::Real && z.im != 0.0 {
            return Err(CliError::Parse(format!(
                "complex entry `{tok}` in a real matrix"
            )));
        }
        data.push(T::from_parts(z.re, z.im));
    }
    if tokens.next().is_some() {
        return Err(CliError::Parse("trailing entries after matrix".into()));
    }
    Matrix::new(rows, cols, data).map_err(CliError::Compute)
}
