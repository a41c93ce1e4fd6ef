//! `key = value` configuration files merged under command-line flags.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{Error, Result};

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Domain(format!("config line {}: expected `key = value`", no + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Domain(format!("config line {}: empty key", no + 1)));
        }
        out.push((k.replace('_', "-"), v.to_string()));
    }
    Ok(out)
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let long_eq = format!("--{key}=");
    args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == long || a.starts_with(&long_eq)
    })
}

/// Location of `--config`, if any.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Insert config entries not overridden on the command line right after the
/// subcommand name (`args[1]`).
pub fn merge_config(args: Vec<OsString>, path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Domain(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config(&text)?;
    if args.len() < 2 {
        return Ok(args);
    }
    let mut out: Vec<OsString> = args[..2].to_vec();
    for (k, v) in entries {
        if k == "config" || flag_present(&args, &k) {
            continue;
        }
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend_from_slice(&args[2..]);
    Ok(out)
}
