use std::io::Write;

use serde::{Serialize, Serializer};

use crate::args::Format;
use crate::run::Failure;

const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits; the shortest round-trip form of the
/// result is what ends up in the document.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.*e}", SIGNIFICANT_DIGITS - 1).parse().unwrap_or(x)
}

pub fn sig<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(round_sig(*x))
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Row {
    #[serde(serialize_with = "sig")]
    pub param: f64,
    #[serde(serialize_with = "sig")]
    pub gamma: f64,
    #[serde(serialize_with = "sig")]
    pub err_est: f64,
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, doc: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, doc).map_err(|e| Failure::Write(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut *out);
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Write(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// CSV table or JSON array of row objects.
pub fn write_rows<T: Serialize>(out: &mut dyn Write, rows: &[T], format: Format) -> Result<(), Failure> {
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, rows),
    }
}
