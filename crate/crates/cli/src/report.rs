//! Report document model and its text / JSON renderings.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Flag(bool),
    Count(u64),
    Number(f64),
    Text(String),
}

impl Value {
    /// Non-finite numbers have no JSON representation; they are kept as text.
    pub fn number(x: f64) -> Self {
        if x.is_finite() {
            Value::Number(x)
        } else {
            Value::Text(format!("{x}"))
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Flag(b) => b.to_string(),
            Value::Count(n) => n.to_string(),
            Value::Number(x) => format_number(*x),
            Value::Text(s) => s.clone(),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Flag(b)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Count(n as u64)
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Count(n)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::number(x)
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Acceptance criterion this check belongs to, when it belongs to one.
    pub criterion: Option<u8>,
    pub claim: String,
    pub values: Vec<NamedValue>,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, claim: impl Into<String>, tolerance: f64, passed: bool) -> Self {
        Self {
            name: name.into(),
            criterion: None,
            claim: claim.into(),
            values: Vec::new(),
            tolerance,
            passed,
        }
    }

    pub fn value(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.values.push(NamedValue {
            name: name.to_owned(),
            value: value.into(),
        });
        self
    }

    pub fn criterion(mut self, c: u8) -> Self {
        self.criterion = Some(c);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.iter().find(|v| v.name == name).map(|v| &v.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The configuration a report was produced from, minus output formatting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub command: String,
    pub merge: Option<String>,
    pub corrector: Option<String>,
    pub d: usize,
    pub seed: Option<u64>,
    pub shots: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub version: String,
    pub command: CommandEcho,
    pub checks: Vec<CheckRecord>,
    pub verdict: Verdict,
}

impl ReportDocument {
    pub fn new(command: CommandEcho, checks: Vec<CheckRecord>) -> Self {
        let verdict = if checks.iter().all(|c| c.passed) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            command,
            checks,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// False for a hand-edited or corrupted document whose verdict disagrees
    /// with its records.
    pub fn is_consistent(&self) -> bool {
        (self.verdict == Verdict::Pass) == self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn emit_report(doc: &ReportDocument, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, doc)?;
            writeln!(out)?;
        }
        Format::Text => out.write_all(render_text(doc).as_bytes())?,
    }
    out.flush()
}

pub fn render_text(doc: &ReportDocument) -> String {
    let mut s = String::new();
    let c = &doc.command;
    let _ = write!(s, "unlockable {}  command: {}  d={}", doc.version, c.command, c.d);
    if let Some(m) = &c.merge {
        let _ = write!(s, "  merge={m}");
    }
    if let Some(p) = &c.corrector {
        let _ = write!(s, "  corrector={p}");
    }
    if let Some(seed) = c.seed {
        let _ = write!(s, "  seed={seed}");
    }
    s.push('\n');

    let header = ["crit", "status", "check", "tolerance", "values"];
    let rows: Vec<[String; 5]> = doc
        .checks
        .iter()
        .map(|r| {
            [
                r.criterion.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                if r.passed { "PASS" } else { "FAIL" }.into(),
                r.name.clone(),
                format_tolerance(r.tolerance),
                r.values
                    .iter()
                    .map(|v| format!("{}={}", v.name, v.value.render()))
                    .collect::<Vec<_>>()
                    .join("  "),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: [&str; 5]| {
        let mut l = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k == 4 {
                l.push_str(cell);
            } else {
                let pad = widths[k] - cell.chars().count();
                l.push_str(cell);
                l.push_str(&" ".repeat(pad + 2));
            }
        }
        l.trim_end().to_owned()
    };
    if rows.is_empty() {
        s.push_str("(no checks)\n");
    } else {
        s.push_str(&line(header));
        s.push('\n');
        for row in &rows {
            s.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
            s.push('\n');
        }
    }
    let passed = doc.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(
        s,
        "verdict: {} ({passed}/{} checks passed)",
        if doc.passed() { "PASS" } else { "FAIL" },
        doc.checks.len()
    );
    s
}

fn format_tolerance(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-3..1e4).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_number(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.3e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> CommandEcho {
        CommandEcho {
            command: "check-cuts".into(),
            merge: None,
            corrector: None,
            d: 2,
            seed: None,
            shots: None,
        }
    }

    #[test]
    fn verdict_follows_records() {
        let ok = CheckRecord::new("a", "x", 1e-10, true);
        let bad = CheckRecord::new("b", "x", 1e-10, false);
        assert!(ReportDocument::new(echo(), vec![ok.clone()]).passed());
        let doc = ReportDocument::new(echo(), vec![ok, bad]);
        assert!(!doc.passed());
        assert!(doc.is_consistent());
        assert_eq!(doc.failed_checks().count(), 1);
        assert!(ReportDocument::new(echo(), vec![]).passed());
    }

    #[test]
    fn untagged_values_keep_their_kind() {
        let r = CheckRecord::new("a", "x", 0.0, true)
            .value("n", 4usize)
            .value("x", 4.0)
            .value("f", true)
            .value("s", "σ1")
            .value("nan", f64::NAN);
        let back: CheckRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back.get("n"), Some(&Value::Count(4)));
        assert_eq!(back.get("x"), Some(&Value::Number(4.0)));
        assert_eq!(back.get("f"), Some(&Value::Flag(true)));
        assert_eq!(back.get("nan"), Some(&Value::Text("NaN".into())));
        assert_eq!(back, r);
    }

    #[test]
    fn text_columns_align() {
        let doc = ReportDocument::new(
            echo(),
            vec![
                CheckRecord::new("short", "x", 1e-10, true).value("v", 0.5),
                CheckRecord::new("a much longer name", "x", 1e-9, false).criterion(4),
            ],
        );
        let text = render_text(&doc);
        let lines: Vec<&str> = text.lines().collect();
        let col = lines[1].find("tolerance").unwrap();
        assert_eq!(lines[2].find("1e-10"), Some(col));
        assert_eq!(lines[3].find("1e-9"), Some(col));
        assert!(lines.last().unwrap().starts_with("verdict: FAIL (1/2"));
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(0.25), "0.250000");
        assert_eq!(format_number(-0.125), "-0.125000");
        assert_eq!(format_number(2.5e-17), "2.500e-17");
        assert_eq!(format_tolerance(0.95), "0.95");
        assert_eq!(format_tolerance(1e-10), "1e-10");
        assert_eq!(format_tolerance(0.0), "0");
    }
}
