//! Plain-text tensor files and the detectability table.
//!
//! The format is deliberately trivial to inspect:
//!
//! ```text
//! tensor 3
//! dims 2 2 2
//! # seed 7
//! 1 2
//! 3 4
//! 5 6
//! 7 8
//! ```
//!
//! Line 1 gives the order, line 2 the dimensions, `#` lines between the
//! header and the payload carry `key value` metadata, and the payload is
//! exactly `prod(dims)` whitespace-separated scalars in first-index-fastest
//! order. Scalars are written in shortest round-trip decimal form, so
//! parse(write(t)) reproduces finite values bit for bit.

use std::fmt;
use std::io::{self, BufRead, Write};

use crate::detect::max_detectable_rank;
use crate::error::{Error, Result};
use crate::tensor::DenseTensor;

/// A tensor plus the `key value` metadata lines of its file form.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorFile {
    pub tensor: DenseTensor,
    pub metadata: Vec<(String, String)>,
}

impl TensorFile {
    pub fn new(tensor: DenseTensor) -> Self {
        Self {
            tensor,
            metadata: Vec::new(),
        }
    }

    pub fn with_metadata(tensor: DenseTensor, metadata: Vec<(String, String)>) -> Self {
        Self { tensor, metadata }
    }

    /// Parse the text format from a buffered reader.
    pub fn parse<R: BufRead>(reader: R) -> Result<TensorFile> {
        let mut lines = reader.lines().enumerate();

        let (header_line, header) = next_content_line(&mut lines)?
            .ok_or_else(|| parse_err(1, "missing 'tensor <order>' header"))?;
        let mut toks = header.split_whitespace();
        if toks.next() != Some("tensor") {
            return Err(parse_err(header_line, "expected 'tensor <order>' header"));
        }
        let order: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| parse_err(header_line, "invalid tensor order"))?;
        if toks.next().is_some() {
            return Err(parse_err(header_line, "trailing tokens after order"));
        }

        let (dims_line, dims_text) = next_content_line(&mut lines)?
            .ok_or_else(|| parse_err(header_line + 1, "dims line missing"))?;
        let mut toks = dims_text.split_whitespace();
        if toks.next() != Some("dims") {
            return Err(parse_err(dims_line, "dims line missing"));
        }
        let mut dims = Vec::with_capacity(order);
        for tok in toks {
            let d: usize = tok
                .parse()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| parse_err(dims_line, format!("invalid dimension '{tok}'")))?;
            dims.push(d);
        }
        if dims.len() != order {
            return Err(parse_err(
                dims_line,
                format!("expected {order} dimensions, found {}", dims.len()),
            ));
        }

        // Metadata comments sit between the header and the payload.
        let mut metadata = Vec::new();
        let expected: usize = dims.iter().product();
        let mut data = Vec::with_capacity(expected);
        let mut payload_started = false;
        for (idx, line) in lines {
            let line = line.map_err(|e| parse_err(idx + 1, e.to_string()))?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if payload_started {
                    return Err(parse_err(idx + 1, "comment inside payload"));
                }
                let mut parts = comment.trim().splitn(2, char::is_whitespace);
                if let Some(key) = parts.next().filter(|k| !k.is_empty()) {
                    let value = parts.next().unwrap_or("").trim().to_string();
                    metadata.push((key.to_string(), value));
                }
                continue;
            }
            payload_started = true;
            for tok in trimmed.split_whitespace() {
                let v: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(idx + 1, format!("non-numeric token '{tok}'")))?;
                data.push(v);
            }
        }
        if data.len() != expected {
            return Err(Error::ValueCount {
                expected,
                actual: data.len(),
            });
        }

        Ok(TensorFile {
            tensor: DenseTensor::new(dims, data)?,
            metadata,
        })
    }

    pub fn parse_str(text: &str) -> Result<TensorFile> {
        Self::parse(text.as_bytes())
    }

    /// Write the text format; payload lines hold one mode-1 fiber each.
    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "tensor {}", self.tensor.order())?;
        write!(w, "dims")?;
        for d in self.tensor.dims() {
            write!(w, " {d}")?;
        }
        writeln!(w)?;
        for (key, value) in &self.metadata {
            if value.is_empty() {
                writeln!(w, "# {key}")?;
            } else {
                writeln!(w, "# {key} {value}")?;
            }
        }
        for fiber in self.tensor.data().chunks(self.tensor.dims()[0]) {
            let mut first = true;
            for v in fiber {
                if !first {
                    write!(w, " ")?;
                }
                write!(w, "{v}")?;
                first = false;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

impl fmt::Display for TensorFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        self.write(&mut buf).map_err(|_| fmt::Error)?;
        f.write_str(&String::from_utf8(buf).map_err(|_| fmt::Error)?)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Next non-blank line with its 1-based number; the header region does not
/// allow comments, so nothing is skipped here.
fn next_content_line(
    lines: &mut std::iter::Enumerate<io::Lines<impl BufRead>>,
) -> Result<Option<(usize, String)>> {
    for (idx, line) in lines {
        let line = line.map_err(|e| parse_err(idx + 1, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        return Ok(Some((idx + 1, trimmed.to_string())));
    }
    Ok(None)
}

/// The detectability table: one `(order, dim, r_max)` row per cell of
/// `N in 2..=n_max`, `I in 2..=i_max`, computed through the same split
/// search as the detector.
pub fn rmax_table(i_max: usize, n_max: usize) -> Result<Vec<(usize, usize, u64)>> {
    let mut rows = Vec::new();
    for order in 2..=n_max {
        for dim in 2..=i_max {
            let (r_max, _) = max_detectable_rank(&vec![dim; order])?;
            rows.push((order, dim, r_max));
        }
    }
    Ok(rows)
}

/// CSV form of [`rmax_table`]: header `N,I,R_max`, LF line endings.
pub fn write_rmax_csv<W: Write>(mut w: W, i_max: usize, n_max: usize) -> Result<()> {
    let rows = rmax_table(i_max, n_max)?;
    let mut out = String::from("N,I,R_max\n");
    for (order, dim, r_max) in rows {
        out.push_str(&format!("{order},{dim},{r_max}\n"));
    }
    w.write_all(out.as_bytes())
        .map_err(|e| parse_err(0, e.to_string()))?;
    Ok(())
}
