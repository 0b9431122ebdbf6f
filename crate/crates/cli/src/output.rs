//! CSV and JSON emission shared by the subcommands.

use std::fmt::Write as _;

use serde::Serialize;

/// 17 significant digits; parses back to the identical `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Comma-separated rows with a header, LF line endings.
#[derive(Debug, Default)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut csv = Self::default();
        csv.row(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) {
        let line: Vec<String> = fields.into_iter().collect();
        let _ = writeln!(self.buf, "{}", line.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[derive(Serialize)]
struct Envelope<'a, I: Serialize, R: Serialize> {
    command: &'a str,
    version: &'a str,
    input: &'a I,
    result: &'a R,
}

/// One JSON object per invocation: command, library version, input echo, result.
pub fn json_report<I: Serialize, R: Serialize>(command: &str, input: &I, result: &R) -> String {
    let env = Envelope {
        command,
        version: env!("CARGO_PKG_VERSION"),
        input,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}
