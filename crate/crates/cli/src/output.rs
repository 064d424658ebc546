use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::{Cli, Format};
use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A command's result in all three renderings.
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub text: String,
    /// Header plus rows; commands without a tabular form fall back to key/value pairs.
    pub csv: Option<String>,
}

pub fn envelope(cli: &Cli, command: &str, result: Value) -> Value {
    json!({
        "tool": "deg2",
        "version": VERSION,
        "command": command,
        "config": serde_json::to_value(cli).unwrap_or(Value::Null),
        "result": result,
    })
}

pub fn resolve(cli: &Cli, path: &Path) -> PathBuf {
    match &cli.out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `bytes` to `--out` (or `default_name` inside the output directory when only
/// that is set), else to stdout.
pub fn write_output(cli: &Cli, bytes: &[u8], default_name: Option<&str>) -> CliResult<()> {
    let target = match (&cli.out, &cli.out_dir, default_name) {
        (Some(p), _, _) => Some(resolve(cli, p)),
        (None, Some(dir), Some(name)) => Some(dir.join(name)),
        _ => None,
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&path, bytes)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn key_value_csv(result: &Value) -> String {
    let mut s = String::from("key,value\n");
    if let Value::Object(map) = result {
        for (k, v) in map {
            let v = match v {
                Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k},{}\n", csv_field(&v)));
        }
    }
    s
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(cli: &Cli, report: Report) -> CliResult<()> {
    let bytes = match cli.format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&envelope(cli, report.command, report.result))?;
            s.push('\n');
            s
        }
        Format::Csv => report.csv.unwrap_or_else(|| key_value_csv(&report.result)),
        Format::Text => {
            let config = serde_json::to_string(cli)?;
            format!(
                "# deg2 {VERSION} {}\n# config: {config}\n{}",
                report.command, report.text
            )
        }
    };
    write_output(cli, bytes.as_bytes(), None)
}
