use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Format;

/// Buffered report: TSV lines with `#` summaries, or one JSON object per line.
pub struct Out {
    format: Format,
    buf: String,
}

impl Out {
    pub fn new(format: Format) -> Out {
        Out { format, buf: String::new() }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn header(&mut self, cols: &[&str]) {
        if self.format == Format::Tsv {
            writeln!(self.buf, "{}", cols.join("\t")).unwrap();
        }
    }

    pub fn row<T: Serialize>(&mut self, tsv: &[String], json: &T) {
        match self.format {
            Format::Tsv => writeln!(self.buf, "{}", tsv.join("\t")).unwrap(),
            Format::Json => writeln!(self.buf, "{}", serde_json::to_string(json).unwrap()).unwrap(),
        }
    }

    pub fn summary<T: Serialize>(&mut self, tsv: &str, json: &T) {
        match self.format {
            Format::Tsv => writeln!(self.buf, "# {tsv}").unwrap(),
            Format::Json => writeln!(self.buf, "{}", serde_json::to_string(json).unwrap()).unwrap(),
        }
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
