//! Minimal CSV writing with stable, byte-reproducible formatting.
//!
//! Files are UTF-8, comma-separated, `.` decimal. Each file starts with a
//! `#`-prefixed schema comment. Fields containing commas or quotes (set
//! serializations do) are quoted. Floats use Rust's shortest round-trip
//! representation so that reruns are byte-identical and raw rows can be
//! re-aggregated exactly.

use std::io::{self, Write};

/// Schema version stamped into every CSV header comment.
pub const SCHEMA_VERSION: &str = "latred-csv v1";

pub fn quote_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            if c == '"' {
                out.push('"');
            }
            out.push(c);
        }
        out.push('"');
        out
    } else {
        s.to_owned()
    }
}

/// Shortest round-trip decimal representation.
pub fn fmt_f64(v: f64) -> String {
    format!("{}", v)
}

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    /// Writes the schema comment line: `# latred-csv v1 <name>`.
    pub fn schema(&mut self, name: &str) -> io::Result<()> {
        writeln!(self.out, "# {} {}", SCHEMA_VERSION, name)
    }

    pub fn comment(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.out, "# {}", text)
    }

    pub fn row<I, S>(&mut self, fields: I) -> io::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let line: Vec<String> = fields
            .into_iter()
            .map(|f| quote_field(f.as_ref()))
            .collect();
        writeln!(self.out, "{}", line.join(","))
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting_rules() {
        assert_eq!(quote_field("plain"), "plain");
        assert_eq!(quote_field("0,2,5"), "\"0,2,5\"");
        assert_eq!(quote_field("a\"b"), "\"a\"\"b\"");
        assert_eq!(quote_field(""), "");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, -4.0, 1e-9, 12345.678901234] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn writer_layout() {
        let mut w = CsvWriter::new(Vec::new());
        w.schema("demo").unwrap();
        w.row(["a", "b,c"]).unwrap();
        let text = String::from_utf8(w.into_inner()).unwrap();
        assert_eq!(text, "# latred-csv v1 demo\na,\"b,c\"\n");
    }
}
