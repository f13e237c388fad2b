use clap::ValueEnum;
use serde_json::{json, Map, Value};

use crate::{RunConfig, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Full precision, pretty printed.
    Json,
    /// Flattened `key,value` rows, or the command's table.
    Csv,
    /// Flattened `key: value` lines, numbers rounded to 6 significant digits.
    Human,
}

/// Rows with fixed headers; cells are JSON scalars.
pub(crate) struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// What a command produced, before formatting.
pub(crate) struct Done {
    pub command: &'static str,
    pub code: i32,
    pub tolerances: Map<String, Value>,
    pub report: Value,
    pub table: Option<Table>,
}

/// `x` rounded to 6 significant digits, printed in its shortest form.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let r: f64 = format!("{x:.5e}").parse().expect("float round trip");
    if r.abs() >= 1e6 || r.abs() < 1e-4 {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn envelope(cfg: &RunConfig, done: &Done) -> Value {
    json!({
        "tool": "mball",
        "version": VERSION,
        "command": done.command,
        "seed": cfg.seed,
        "tolerances": done.tolerances,
        "exit_code": done.code,
        "report": done.report,
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

fn cell(v: &Value, human: bool) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if human && n.is_f64() => format_sig6(n.as_f64().expect("f64")),
        other => other.to_string(),
    }
}

fn write_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn metadata_line(cfg: &RunConfig, done: &Done) -> String {
    let tol: Vec<String> = done.tolerances.iter().map(|(k, v)| format!("{k}={}", cell(v, false))).collect();
    format!(
        "# tool=mball version={VERSION} command={} seed={} {} exit_code={}\n",
        done.command,
        cfg.seed,
        tol.join(" "),
        done.code
    )
}

pub(crate) fn render(cfg: &RunConfig, done: &Done) -> String {
    let default = if done.table.is_some() { Format::Csv } else { Format::Json };
    let format = cfg.format.unwrap_or(default);
    let env = envelope(cfg, done);
    match (format, &done.table) {
        (Format::Json, _) => serde_json::to_string_pretty(&env).expect("serializable") + "\n",
        (Format::Csv, Some(t)) => {
            let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(|c| cell(c, false)).collect()).collect();
            metadata_line(cfg, done) + &write_csv(&t.headers, &rows)
        }
        (Format::Human, Some(t)) => {
            let mut rows: Vec<Vec<String>> = vec![t.headers.iter().map(|h| h.to_string()).collect()];
            rows.extend(t.rows.iter().map(|r| r.iter().map(|c| cell(c, true)).collect()));
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            let mut out = metadata_line(cfg, done);
            for r in rows {
                let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            out
        }
        (Format::Csv, None) => {
            let mut flat = Vec::new();
            flatten("", &env, &mut flat);
            let rows: Vec<Vec<String>> = flat.iter().map(|(k, v)| vec![k.clone(), cell(v, false)]).collect();
            write_csv(&["key", "value"], &rows)
        }
        (Format::Human, None) => {
            let mut flat = Vec::new();
            flatten("", &env, &mut flat);
            flat.iter().map(|(k, v)| format!("{k}: {}\n", cell(v, true))).collect()
        }
    }
}
