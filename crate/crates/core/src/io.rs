//! Plain-text tensor files.
//!
//! ```text
//! ct-tensor 1
//! dims 2 2 1
//! field real
//! slice 1
//! 1 0.5
//! -2 3
//! ```
//!
//! One item per line; `#` starts a comment and blank lines are ignored.
//! Complex entries are written `(re,im)` with no interior spaces. Every number
//! uses the shortest decimal that parses back to the same `f64`, so a write
//! followed by a parse reproduces the tensor bit for bit. When `n2 = 0` the
//! slice blocks have no rows.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::matrix::C64;
use crate::tensor::Tensor3;

const MAGIC: &str = "ct-tensor";
const VERSION: &str = "1";

/// Shortest round-trip decimal: plain notation unless the value needs an
/// exponent to stay short.
fn format_f64(v: f64) -> String {
    let debug = format!("{v:?}");
    if debug.contains('e') {
        debug
    } else {
        format!("{v}")
    }
}

fn format_entry(v: C64, complex: bool) -> String {
    if complex {
        format!("({},{})", format_f64(v.re), format_f64(v.im))
    } else {
        format_f64(v.re)
    }
}

pub fn write_tensor(a: &Tensor3) -> String {
    let (n1, n2, n3) = a.dims();
    let complex = !a.is_real();
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "dims {n1} {n2} {n3}").unwrap();
    writeln!(out, "field {}", if complex { "complex" } else { "real" }).unwrap();
    for k in 0..n3 {
        writeln!(out, "slice {}", k + 1).unwrap();
        if n2 == 0 {
            continue;
        }
        for i in 0..n1 {
            let row: Vec<String> = (0..n2)
                .map(|j| format_entry(a[(i, j, k)], complex))
                .collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("`{token}` is not a number")))
}

fn parse_entry(token: &str, complex: bool, line: usize) -> Result<C64> {
    if let Some(inner) = token.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        if !complex {
            return Err(parse_error(
                line,
                format!("complex entry `{token}` in a real tensor"),
            ));
        }
        let (re, im) = inner
            .split_once(',')
            .ok_or_else(|| parse_error(line, format!("`{token}` is not of the form (re,im)")))?;
        return Ok(C64::new(parse_f64(re, line)?, parse_f64(im, line)?));
    }
    Ok(C64::new(parse_f64(token, line)?, 0.0))
}

/// Meaningful lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then_some((i + 1, content))
    })
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
    last_line: usize,
) -> Result<(usize, Vec<&'a str>)> {
    let (line, content) = lines
        .next()
        .ok_or_else(|| parse_error(last_line, format!("missing `{key}` line")))?;
    let mut words = content.split_whitespace();
    if words.next() != Some(key) {
        return Err(parse_error(
            line,
            format!("expected `{key}`, found `{content}`"),
        ));
    }
    Ok((line, words.collect()))
}

pub fn parse_tensor(text: &str) -> Result<Tensor3> {
    let mut lines = content_lines(text);

    let (line, version) = header(&mut lines, MAGIC, 1)?;
    if version != [VERSION] {
        return Err(parse_error(
            line,
            format!("unsupported format version `{}`", version.join(" ")),
        ));
    }

    let (line, dims) = header(&mut lines, "dims", line)?;
    let dims: Vec<usize> = dims
        .iter()
        .map(|d| {
            d.parse::<usize>()
                .map_err(|_| parse_error(line, format!("bad dimension `{d}`")))
        })
        .collect::<Result<_>>()?;
    let [n1, n2, n3] = dims[..] else {
        return Err(parse_error(line, "dims needs exactly three values"));
    };
    if n3 == 0 {
        return Err(parse_error(line, "n3 must be positive"));
    }

    let (line, field) = header(&mut lines, "field", line)?;
    let complex = match field[..] {
        ["real"] => false,
        ["complex"] => true,
        _ => {
            return Err(parse_error(
                line,
                format!("unknown field `{}`", field.join(" ")),
            ))
        }
    };

    let rows_per_slice = if n2 == 0 { 0 } else { n1 };
    let mut data = Vec::with_capacity(n1 * n2 * n3);
    let mut last = line;
    for k in 0..n3 {
        let (line, content) = lines
            .next()
            .ok_or_else(|| Error::DimsMismatch(format!("expected {n3} slices, found {k}")))?;
        let mut words = content.split_whitespace();
        if words.next() != Some("slice") {
            return Err(Error::DimsMismatch(format!(
                "line {line}: expected `slice {}`, found `{content}`",
                k + 1
            )));
        }
        let index: Vec<&str> = words.collect();
        if index != [(k + 1).to_string().as_str()] {
            return Err(parse_error(line, format!("expected `slice {}`", k + 1)));
        }
        last = line;
        for i in 0..rows_per_slice {
            let (line, content) = lines.next().ok_or_else(|| {
                Error::DimsMismatch(format!("slice {} ends after {i} of {n1} rows", k + 1))
            })?;
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.first() == Some(&"slice") {
                return Err(Error::DimsMismatch(format!(
                    "line {line}: slice {} has {i} rows, header says {n1}",
                    k + 1
                )));
            }
            if tokens.len() != n2 {
                return Err(Error::DimsMismatch(format!(
                    "line {line}: row has {} entries, header says {n2}",
                    tokens.len()
                )));
            }
            for t in tokens {
                data.push(parse_entry(t, complex, line)?);
            }
            last = line;
        }
    }
    if let Some((line, content)) = lines.next() {
        return Err(Error::DimsMismatch(format!(
            "line {line}: unexpected `{content}` after the last slice (previous item on line {last})"
        )));
    }

    // data was read slice by slice, row by row: the storage order
    Tensor3::new((n1, n2, n3), data)
}

/// Parses raw bytes, which must be UTF-8.
pub fn parse_tensor_file(bytes: &[u8]) -> Result<Tensor3> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = 1 + bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count();
        parse_error(line, "file is not valid UTF-8")
    })?;
    parse_tensor(text)
}
