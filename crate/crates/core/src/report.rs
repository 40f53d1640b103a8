//! JSON Lines and CSV renderings of verification records.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::bounds::BoundId;
use crate::error::{Error, Result};
use crate::verify::{Status, VerificationRecord};

/// Compact JSON formatter that prints floats as `{:.16e}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FullPrecision;

impl Formatter for FullPrecision {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `{:.16e}`, the 17-significant-digit form used in all outputs.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serializes `value` as one line of compact JSON (no trailing newline).
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, FullPrecision);
    value.serialize(&mut ser).map_err(|e| Error::InvalidParameter(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidParameter(format!("i/o error: {e}"))
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[VerificationRecord]) -> Result<()> {
    for r in records {
        writeln!(out, "{}", to_json(r)?).map_err(io_err)?;
    }
    Ok(())
}

pub fn read_jsonl(text: &str) -> Result<Vec<VerificationRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidParameter(format!("bad record: {e}"))))
        .collect()
}

pub const CSV_HEADER: [&str; 9] =
    ["instance_id", "bound_id", "alpha_re", "alpha_im", "lhs", "lhs_error", "rhs", "slack", "status"];

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    instance_id: String,
    bound_id: BoundId,
    alpha_re: f64,
    alpha_im: f64,
    lhs: f64,
    lhs_error: f64,
    rhs: f64,
    slack: f64,
    status: Status,
}

pub fn write_csv<W: Write>(out: W, records: &[VerificationRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for r in records {
        let row = [
            r.instance_id.clone(),
            r.bound_id.as_str().to_string(),
            fmt_f64(r.alpha.re),
            fmt_f64(r.alpha.im),
            fmt_f64(r.lhs),
            fmt_f64(r.lhs_error),
            fmt_f64(r.rhs),
            fmt_f64(r.slack),
            r.status.as_str().to_string(),
        ];
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// Parses CSV written by [`write_csv`]. The effective tolerance is not a CSV
/// column, so `tol` comes back as NaN.
pub fn read_csv(text: &str) -> Result<Vec<VerificationRecord>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.deserialize::<CsvRow>()
        .map(|row| {
            let r = row.map_err(|e| Error::InvalidParameter(format!("bad CSV row: {e}")))?;
            Ok(VerificationRecord {
                instance_id: r.instance_id,
                bound_id: r.bound_id,
                alpha: Complex64::new(r.alpha_re, r.alpha_im),
                lhs: r.lhs,
                lhs_error: r.lhs_error,
                rhs: r.rhs,
                slack: r.slack,
                status: r.status,
                tol: f64::NAN,
            })
        })
        .collect()
}
