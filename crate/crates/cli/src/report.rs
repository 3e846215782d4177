//! Report assembly and the two output formats.

use std::fmt::Display;
use std::io::{self, Write};

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Record,
}

#[derive(Debug, Clone, PartialEq)]
enum Line {
    /// Result pairs; these also go into the JSON summary.
    Result(Vec<(String, String)>),
    /// One row of a table; counted but not copied into the summary.
    Row(Vec<(String, String)>),
}

/// What a subcommand produced. `failed` lists the checks that did not hold.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    lines: Vec<Line>,
    pub failed: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl Display) {
        self.lines.push(Line::Result(vec![(key.to_string(), value.to_string())]));
    }

    /// Several result pairs printed on one line.
    pub fn line(&mut self, pairs: &[(&str, String)]) {
        self.lines.push(Line::Result(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()));
    }

    pub fn row(&mut self, pairs: &[(&str, String)]) {
        self.lines.push(Line::Row(pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()));
    }

    /// Record a pass/fail check under `key`.
    pub fn check(&mut self, key: &str, ok: bool) {
        self.put(key, ok);
        if !ok {
            self.failed.push(key.to_string());
        }
    }

    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    fn results(&self) -> Map<String, Value> {
        let mut m = Map::new();
        for l in &self.lines {
            if let Line::Result(pairs) = l {
                for (k, v) in pairs {
                    m.insert(k.clone(), Value::String(v.clone()));
                }
            }
        }
        m
    }

    fn rows(&self) -> usize {
        self.lines.iter().filter(|l| matches!(l, Line::Row(_))).count()
    }
}

fn pairs_text(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Effective configuration of a run, echoed by both formats.
#[derive(Debug, Clone, PartialEq)]
pub struct Echo {
    pub command: String,
    pub seed: u64,
    pub workers: usize,
    pub caps: Vec<(&'static str, String)>,
}

impl Echo {
    fn pairs(&self) -> Vec<(String, String)> {
        let mut v = vec![
            ("command".to_string(), self.command.clone()),
            ("seed".to_string(), self.seed.to_string()),
            ("workers".to_string(), self.workers.to_string()),
        ];
        v.extend(self.caps.iter().map(|(k, c)| (k.to_string(), c.clone())));
        v
    }
}

pub fn render(report: &Report, echo: &Echo, format: Format) -> String {
    let mut out = String::new();
    let status = if report.ok() { "ok" } else { "fail" };
    match format {
        Format::Human => {
            out.push_str(&format!("# {}\n", pairs_text(&echo.pairs())));
            let mut i = 0;
            while i < report.lines.len() {
                match &report.lines[i] {
                    Line::Result(p) => {
                        out.push_str(&pairs_text(p));
                        out.push('\n');
                        i += 1;
                    }
                    Line::Row(_) => {
                        let start = i;
                        while i < report.lines.len() && matches!(report.lines[i], Line::Row(_)) {
                            i += 1;
                        }
                        out.push_str(&table(&report.lines[start..i]));
                    }
                }
            }
            if !report.ok() {
                out.push_str(&format!("FAILED: {}\n", report.failed.join(", ")));
            }
        }
        Format::Record => {
            for (k, v) in echo.pairs() {
                out.push_str(&format!("{k}={v}\n"));
            }
            for l in &report.lines {
                match l {
                    Line::Result(p) => {
                        for (k, v) in p {
                            out.push_str(&format!("{k}={v}\n"));
                        }
                    }
                    Line::Row(p) => {
                        out.push_str(&pairs_text(p));
                        out.push('\n');
                    }
                }
            }
            out.push_str(&format!("status={status}\n"));
            let config: Map<String, Value> = echo.pairs().into_iter().map(|(k, v)| (k, Value::String(v))).collect();
            let summary = json!({
                "command": echo.command,
                "config": config,
                "failed": report.failed,
                "results": report.results(),
                "rows": report.rows(),
                "status": status,
            });
            out.push_str(&summary.to_string());
            out.push('\n');
        }
    }
    out
}

/// Rows with the same keys as their first row print as an aligned table.
fn table(rows: &[Line]) -> String {
    let rows: Vec<&Vec<(String, String)>> = rows
        .iter()
        .map(|l| match l {
            Line::Row(p) => p,
            Line::Result(p) => p,
        })
        .collect();
    let keys: Vec<&String> = rows[0].iter().map(|(k, _)| k).collect();
    let uniform = rows.iter().all(|r| r.len() == keys.len() && r.iter().zip(&keys).all(|((k, _), h)| k == *h));
    if !uniform {
        return rows.iter().map(|r| pairs_text(r) + "\n").collect();
    }
    let widths: Vec<usize> =
        (0..keys.len()).map(|c| rows.iter().map(|r| r[c].1.len()).max().unwrap_or(0).max(keys[c].len())).collect();
    let fmt_row = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        s.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = fmt_row(keys.iter().map(|k| k.as_str()).collect());
    for r in rows {
        out.push_str(&fmt_row(r.iter().map(|(_, v)| v.as_str()).collect()));
    }
    out
}

pub fn emit(text: &str) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn echo() -> Echo {
        Echo { command: "length".into(), seed: 7, workers: 2, caps: vec![("cap_enum", "unused".into())] }
    }

    #[test]
    fn record_lines_and_summary() {
        let mut r = Report::new();
        r.put("length", "1/2");
        r.row(&[("n", "1".into()), ("count", "2".into())]);
        r.check("holds", true);
        let text = render(&r, &echo(), Format::Record);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(&lines[..4], &["command=length", "seed=7", "workers=2", "cap_enum=unused"]);
        assert!(lines.contains(&"length=1/2"));
        assert!(lines.contains(&"n=1 count=2"));
        let v: Value = serde_json::from_str(lines.last().unwrap()).unwrap();
        assert_eq!(v["status"], "ok");
        assert_eq!(v["config"]["seed"], "7");
        assert_eq!(v["results"]["length"], "1/2");
        assert_eq!(v["rows"], 1);
    }

    #[test]
    fn failed_check_marks_status() {
        let mut r = Report::new();
        r.check("holds", false);
        assert!(!r.ok());
        let text = render(&r, &echo(), Format::Record);
        assert!(text.contains("status=fail"));
        assert!(render(&r, &echo(), Format::Human).contains("FAILED: holds"));
    }

    #[test]
    fn human_table_is_aligned() {
        let mut r = Report::new();
        r.row(&[("n", "1".into()), ("count", "2".into())]);
        r.row(&[("n", "10".into()), ("count", "144".into())]);
        let text = render(&r, &echo(), Format::Human);
        assert!(text.contains(" n  count\n 1      2\n10    144\n"), "{text}");
    }
}
