//! The single JSON document every run produces, and its text rendering.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use lpf_core::LogNumber;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    /// Subcommand path, e.g. `"bound first"`.
    pub command: String,
    /// Every result-affecting flag with its resolved value, keyed by flag name.
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub timestamp: String,
}

impl Manifest {
    pub fn new(command: &str, parameters: Vec<(&str, String)>, seed: Option<u64>, timestamp: String) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            seed,
            timestamp,
        }
    }

    /// Arguments that re-run this manifest, without the program name.
    pub fn argv(&self) -> Vec<String> {
        let mut out: Vec<String> = self.command.split(' ').map(str::to_string).collect();
        for (k, v) in &self.parameters {
            out.push(format!("--{k}"));
            out.push(v.clone());
        }
        out.push("--timestamp".into());
        out.push(self.timestamp.clone());
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub manifest: Manifest,
    /// `"ok"`, `"PASS"` or `"FAIL"`.
    pub status: String,
    pub result: Value,
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialise");
        s.push('\n');
        s
    }
}

/// `--timestamp`, else `SOURCE_DATE_EPOCH`, else the current time; RFC 3339 UTC.
pub fn resolve_timestamp(flag: Option<&str>) -> Result<String, String> {
    if let Some(t) = flag {
        return Ok(t.to_string());
    }
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 = epoch
            .trim()
            .parse()
            .map_err(|_| format!("SOURCE_DATE_EPOCH is not an integer: {epoch:?}"))?;
        let at = DateTime::<Utc>::from_timestamp(secs, 0).ok_or("SOURCE_DATE_EPOCH out of range")?;
        return Ok(at.to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    Ok(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
}

/// Reals travel as 17-significant-digit strings.
pub fn real(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}

pub fn log_real(x: LogNumber) -> Value {
    Value::String(x.to_string())
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| i.is_object()) && !items.is_empty() => {
            out.push(format!("{prefix}:"));
            out.extend(table(items));
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            out.push(format!("{prefix} = [{}]", parts.join(", ")));
        }
        _ => out.push(format!("{prefix} = {}", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Rows of scalar-valued objects as aligned columns.
fn table(rows: &[Value]) -> Vec<String> {
    let columns: Vec<String> = rows[0]
        .as_object()
        .map(|m| {
            m.iter()
                .filter(|(_, v)| !v.is_object() && !v.is_array())
                .map(|(k, _)| k.clone())
                .collect()
        })
        .unwrap_or_default();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            columns
                .iter()
                .map(|c| r.get(c).map(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}", padded.join("  ").trim_end())
    };
    let mut out = vec![line(&columns)];
    out.extend(cells.iter().map(|r| line(r)));
    out
}

/// Human-readable rendering of a document. Reproduction checks become
/// PASS/FAIL lines; everything else is flattened `key = value`.
pub fn render_text(doc: &Document) -> String {
    let value = serde_json::to_value(doc).expect("documents serialise");
    let mut out = Vec::new();
    flatten("manifest", &value["manifest"], &mut out);
    out.push(format!("status = {}", doc.status));
    let mut result = value["result"].clone();
    let checks = result.as_object_mut().and_then(|m| m.remove("checks"));
    flatten("result", &result, &mut out);
    if let Some(Value::Array(checks)) = checks {
        for c in checks {
            out.push(scalar(&c["line"]));
        }
    }
    out.push(String::new());
    out.join("\n")
}
