//! `--config FILE`: `key = value` lines (`#` comments) spliced into the argument list as
//! flags, so values go through the same parser. A key the command line already sets
//! is dropped, which is how flags take precedence over the file.

use std::ffi::OsString;
use std::path::Path;

/// Number of leading tokens (program name and subcommand names) before any flag.
fn command_depth(args: &[OsString]) -> usize {
    match args.get(1).and_then(|a| a.to_str()) {
        Some("hardy") => 3.min(args.len()),
        Some(_) => 2,
        None => 1,
    }
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

fn given(args: &[OsString], flag: &str) -> bool {
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&format!("{flag}="))
    })
}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let key = k.trim().replace('_', "-");
        if key == "config" {
            return Err(format!("config line {}: nested config files are not supported", i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Returns `args` with the config file's entries inserted after the subcommand names.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let depth = command_depth(&args);
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in parse(&text)? {
        let flag = format!("--{key}");
        if given(&args[depth..], &flag) {
            continue;
        }
        if key == "strict" {
            match value.as_str() {
                "true" | "1" | "yes" => extra.push(flag.into()),
                "false" | "0" | "no" => {}
                other => return Err(format!("config key strict: expected true or false, got '{other}'")),
            }
        } else {
            extra.push(format!("{flag}={value}").into());
        }
    }
    let mut out: Vec<OsString> = args[..depth].to_vec();
    out.extend(extra);
    out.extend(args[depth..].iter().cloned());
    Ok(out)
}
