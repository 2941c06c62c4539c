//! Flat key=value configuration merged under the command line.

use std::fs;
use std::path::Path;

/// Value of `--config` in raw arguments, if any.
pub fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Appends config entries whose flag does not already appear in `argv`.
/// `true` and `false` stand for switches.
pub fn merge(argv: &[String], entries: &[(String, String)]) -> Vec<String> {
    let mut out = argv.to_vec();
    for (k, v) in entries {
        let flag = format!("--{k}");
        let given = argv
            .iter()
            .any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
        if given || k == "config" {
            continue;
        }
        match v.as_str() {
            "true" => out.push(flag),
            "false" => {}
            _ => out.push(format!("{flag}={v}")),
        }
    }
    out
}

pub fn load_and_merge(argv: &[String]) -> Result<Vec<String>, String> {
    match config_path(argv) {
        None => Ok(argv.to_vec()),
        Some(p) => {
            let text = fs::read_to_string(Path::new(&p)).map_err(|e| format!("cannot read config {p}: {e}"))?;
            Ok(merge(argv, &parse(&text)?))
        }
    }
}
