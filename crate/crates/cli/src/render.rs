use std::io::Write;
use std::path::{Path, PathBuf};

use qcstar_core::Check;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

/// Everything a command produces: its checks and an optional computed value.
#[derive(Debug, Serialize)]
pub struct Outcome {
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Outcome {
    pub fn new(command: &str, seed: u64, checks: Vec<Check>, result: Option<Value>) -> Self {
        let passed = checks.iter().all(Check::passed);
        Self { command: command.into(), seed, passed, checks, result }
    }
}

pub fn witness_path(out: Option<&Path>) -> PathBuf {
    match out {
        Some(p) => {
            let mut name = p.file_stem().unwrap_or_default().to_os_string();
            name.push(".witness.json");
            p.with_file_name(name)
        }
        None => PathBuf::from("qcstar.witness.json"),
    }
}

/// Failing checks with their witnesses, in report order.
pub fn witness_document(outcome: &Outcome) -> Value {
    let failures: Vec<Value> = outcome
        .checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| json!({"suite": c.suite, "check": c.check, "residual": c.residual.is_finite().then_some(c.residual), "witness": c.witness}))
        .collect();
    json!({"command": outcome.command, "seed": outcome.seed, "failures": failures})
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(outcome: &Outcome, format: Format, witness_file: &str) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(outcome).expect("reports serialise");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("suite,check,verdict,residual,witness_ref\n");
            let mut failure = 0;
            for c in &outcome.checks {
                let residual = if c.residual.is_finite() { format!("{:e}", c.residual) } else { String::new() };
                let wref = if c.passed() {
                    String::new()
                } else {
                    failure += 1;
                    format!("{witness_file}#{}", failure - 1)
                };
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_field(&c.suite),
                    csv_field(&c.check),
                    c.verdict.as_str(),
                    residual,
                    csv_field(&wref)
                ));
            }
            s
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcstar_core::Verdict;

    #[test]
    fn empty_csv_has_header() {
        let o = Outcome::new("axioms", 0, vec![], None);
        assert_eq!(render(&o, Format::Csv, "w.json"), "suite,check,verdict,residual,witness_ref\n");
        assert!(o.passed);
    }

    #[test]
    fn failing_row_points_at_witness() {
        let checks = vec![
            Check::new("s", "ok", Verdict::Pass, 0.0),
            Check::new("s", "bad", Verdict::Fail, 0.5).with_witness(json!({"i": 3})),
        ];
        let o = Outcome::new("root", 1, checks, None);
        let csv = render(&o, Format::Csv, "r.witness.json");
        assert!(csv.ends_with("s,bad,fail,5e-1,r.witness.json#0\n"), "{csv}");
        assert_eq!(witness_document(&o)["failures"][0]["witness"]["i"], 3);
        assert_eq!(witness_path(Some(Path::new("out/r.csv"))), PathBuf::from("out/r.witness.json"));
    }
}
