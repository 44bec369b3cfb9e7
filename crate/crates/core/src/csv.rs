//! Minimal CSV helpers shared by the trajectory dumps and the CLI.

use std::io::{self, Write};

/// Formats a number with 15 significant digits in scientific notation.
/// Negative zero prints as zero so that reruns compare byte for byte.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.14e}", 0.0);
    }
    format!("{x:.14e}")
}

/// Quotes a field when it contains a separator, quote or newline.
pub fn field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_row<W: Write>(w: &mut W, cells: &[String]) -> io::Result<()> {
    writeln!(w, "{}", cells.join(","))
}

pub fn write_header<W: Write>(w: &mut W, names: &[&str]) -> io::Result<()> {
    writeln!(w, "{}", names.iter().map(|n| field(n)).collect::<Vec<_>>().join(","))
}
