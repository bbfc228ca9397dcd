//! Numeric rendering shared by every output format: values are rounded to
//! 12 significant digits so golden files diff cleanly across platforms.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits. Zero,
/// including negative zero, maps to `0.0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    s.parse().expect("formatted float parses")
}

/// Plain decimal text of the rounded value, without trailing zeros.
pub fn format_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Short human-readable rendering for summaries: six significant digits,
/// scientific notation below `1e-4`.
pub fn format_short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format_sig(x);
    }
    if x.abs() < 1e-4 {
        return format!("{x:.2e}");
    }
    let s = format!("{:.5e}", x);
    format!("{}", s.parse::<f64>().expect("formatted float parses"))
}

/// Serializer hook for fields that must be rounded.
pub fn ser_sig<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub fn ser_sig_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

pub fn ser_sig_pairs<S: serde::Serializer>(xs: &[(f64, f64)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &(a, b) in xs {
        seq.serialize_element(&[round_sig(a), round_sig(b)])?;
    }
    seq.end()
}

/// Pretty JSON with a trailing newline. Key order follows struct field order.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report types serialize");
    out.push('\n');
    out
}

/// Joins already-formatted cells into CSV lines.
pub fn csv_line(cells: &[String]) -> String {
    let mut line = String::new();
    for (i, c) in cells.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        let _ = write!(line, "{c}");
    }
    line.push('\n');
    line
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // A closed pipe is not worth a failure exit.
            let _ = out.write_all(text.as_bytes());
            let _ = out.flush();
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(format_sig(0.75), "0.75");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(round_sig(0.7500000000000002), 0.75);
        assert_eq!(format_sig(1.2345678901234e-5), "0.0000123456789012");
        assert_eq!(format_short(6.4e-16), "6.40e-16");
        assert_eq!(format_short(0.000651139418909), "0.000651139");
        assert_eq!(format_short(0.75), "0.75");
    }

    #[test]
    fn csv_cells() {
        assert_eq!(csv_line(&["a".into(), "b".into()]), "a,b\n");
    }
}
