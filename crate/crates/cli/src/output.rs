use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use vdclab::{Error, Result};

/// One command's result in every form it can be rendered as.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub text: Option<String>,
    pub csv: Option<String>,
    pub json: Value,
    /// `Some(false)` marks a negative verdict (exit 1 under `--strict`).
    pub verdict: Option<bool>,
}

impl Report {
    pub fn text(text: impl Into<String>, json: Value) -> Self {
        Self {
            text: Some(text.into()),
            json,
            ..Self::default()
        }
    }

    pub fn csv(csv: String, json: Value) -> Self {
        Self {
            csv: Some(csv),
            json,
            ..Self::default()
        }
    }

    pub fn json(json: Value) -> Self {
        Self {
            json,
            ..Self::default()
        }
    }

    pub fn with_verdict(mut self, ok: bool) -> Self {
        self.verdict = Some(ok);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Provenance<'a> {
    pub argv: &'a [String],
    pub seed: u64,
}

/// Arguments recorded in provenance: everything except `--threads` and `--output`.
pub fn recorded_argv(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" || a == "--output" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") || a.starts_with("--output=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_.,:/=+^*".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', "'\\''"))
    }
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn render(report: &Report, format: Option<Format>, provenance: Option<&Provenance>) -> String {
    let json_mode = match format {
        Some(Format::Json) => true,
        Some(Format::Csv) => report.csv.is_none() && report.text.is_none(),
        None => report.text.is_none() && report.csv.is_none(),
    };
    if json_mode {
        let mut value = report.json.clone();
        if let Some(p) = provenance {
            let block = json!({
                "tool": "vdclab",
                "version": env!("CARGO_PKG_VERSION"),
                "argv": recorded_argv(p.argv),
                "seed": p.seed,
            });
            value = match value {
                Value::Object(mut m) => {
                    m.insert("provenance".into(), block);
                    Value::Object(m)
                }
                other => json!({"provenance": block, "result": other}),
            };
        }
        return render_json(&value);
    }
    let body = match format {
        Some(Format::Csv) => report.csv.clone().or_else(|| report.text.clone()),
        _ => report.text.clone().or_else(|| report.csv.clone()),
    }
    .expect("non-json body");
    let mut out = String::new();
    if let Some(p) = provenance {
        let argv: Vec<String> = recorded_argv(p.argv).iter().map(|a| quote(a)).collect();
        let _ = writeln!(out, "# vdclab {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# argv: {}", argv.join(" "));
        let _ = writeln!(out, "# seed: {}", p.seed);
    }
    out.push_str(&with_newline(body));
    out
}

pub fn write_file(path: &Path, content: &[u8]) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::Resource(format!("cannot write {}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Argument(format!("cannot read {}: {e}", path.display())))
}

/// RFC-4180 field quoting.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argv_drops_threads_and_output() {
        let argv: Vec<String> = ["vdclab", "analyze", "--threads", "8", "--output=x.csv", "--n-max", "10"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(recorded_argv(&argv), vec!["vdclab", "analyze", "--n-max", "10"]);
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("x"), "x");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn provenance_forms() {
        let argv = vec!["vdclab".to_string(), "pet".into(), "cv".into()];
        let p = Provenance { argv: &argv, seed: 3 };
        let r = Report::text("(1)", json!({"vector": [1]}));
        let text = render(&r, None, Some(&p));
        assert!(text.starts_with("# vdclab ") && text.ends_with("(1)\n"));
        let js: Value = serde_json::from_str(&render(&r, Some(Format::Json), Some(&p))).unwrap();
        assert_eq!(js["provenance"]["seed"], 3);
        assert_eq!(render(&r, None, None), "(1)\n");
    }
}
