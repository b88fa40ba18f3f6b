//! JSON config files supplying default flag values.
//!
//! Layout: top-level scalars are global flags, objects are keyed by command
//! name (and by suite name under `verify`):
//!
//! ```json
//! { "workers": 2, "moment": { "x": 4096, "alpha": "0.02,0.01" },
//!   "verify": { "gauss": { "nmax": 200, "tol": 1e-10 } } }
//! ```
//!
//! Values are spliced into the argument list just after the command they
//! belong to, ahead of the user's own flags, so the user's flags win.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

const GLOBAL_WITH_VALUE: [&str; 2] = ["--workers", "--config"];

/// The `--config` path, if any.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Positions of the command and (for `verify`) suite tokens.
fn command_positions(args: &[String]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if GLOBAL_WITH_VALUE.contains(&a.as_str()) {
            i += 2;
            continue;
        }
        if a.starts_with('-') {
            if !out.is_empty() {
                break;
            }
            i += 1;
            continue;
        }
        out.push(i);
        if args[out[0]] != "verify" || out.len() == 2 {
            break;
        }
        i += 1;
    }
    out
}

fn flags(obj: &Map<String, Value>, what: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (k, v) in obj {
        let flag = format!("--{}", k.replace('_', "-"));
        match v {
            Value::Object(_) => continue,
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => out.extend([flag, n.to_string()]),
            Value::String(s) => out.extend([flag, s.clone()]),
            Value::Array(xs) => {
                let parts: Vec<String> = xs
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) => Ok(n.to_string()),
                        _ => bail!("config {what}.{k}: list entries must be numbers or strings"),
                    })
                    .collect::<Result<_>>()?;
                out.extend([flag, parts.join(",")]);
            }
        }
    }
    Ok(out)
}

/// Splices config values into `args`.
pub fn apply(args: Vec<String>, config: &Value) -> Result<Vec<String>> {
    let root = config.as_object().context("config must be a JSON object")?;
    let pos = command_positions(&args);
    let mut out = args;
    let mut scopes: Vec<(usize, Vec<String>)> = Vec::new();
    if let Some(&cmd_at) = pos.first() {
        let cmd = out[cmd_at].clone();
        if let Some(Value::Object(obj)) = root.get(&cmd) {
            scopes.push((cmd_at + 1, flags(obj, &cmd)?));
            if let Some(&sub_at) = pos.get(1) {
                let sub = out[sub_at].clone();
                if let Some(Value::Object(sobj)) = obj.get(&sub) {
                    scopes.push((sub_at + 1, flags(sobj, &format!("{cmd}.{sub}"))?));
                }
            }
        }
    }
    scopes.push((1, flags(root, "config")?));
    // highest position first so earlier positions stay valid
    scopes.sort_by(|a, b| b.0.cmp(&a.0));
    for (at, toks) in scopes {
        out.splice(at..at, toks);
    }
    Ok(out)
}

/// Reads the config named by `--config`, if any, and splices it in.
pub fn load_and_apply(args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("--config: cannot read {path}"))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("--config: {path} is not valid JSON"))?;
    apply(args, &value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn splices_after_each_scope() {
        let cfg: Value = serde_json::from_str(
            r#"{"workers": 2, "json": true, "verify": {"gauss": {"nmax": 9, "quiet": false}}, "scan": {"l": 3}}"#,
        )
        .unwrap();
        let out = apply(argv("q --config c.json verify gauss --kmax 2"), &cfg).unwrap();
        assert_eq!(out, argv("q --json --workers 2 --config c.json verify gauss --nmax 9 --kmax 2"));
        let out = apply(argv("q scan --l 5"), &cfg).unwrap();
        assert_eq!(out, argv("q --json --workers 2 scan --l 3 --l 5"));
    }

    #[test]
    fn lists_and_paths() {
        let cfg: Value = serde_json::from_str(r#"{"verify": {"poisson": {"n": [1, 3, 5]}}}"#).unwrap();
        let out = apply(argv("q verify poisson"), &cfg).unwrap();
        assert_eq!(out, argv("q verify poisson --n 1,3,5"));
        assert_eq!(config_path(&argv("q --config=a.json fit")), Some("a.json".into()));
        assert_eq!(config_path(&argv("q fit")), None);
        assert!(apply(argv("q fit"), &serde_json::json!([1])).is_err());
    }
}
