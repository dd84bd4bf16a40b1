//! Merges a `key = value` config file into the argument list.
//!
//! File entries are inserted right after the subcommand, so any flag given
//! on the command line appears later and overrides them.

use std::ffi::OsString;

use crate::CliError;

/// Keys whose values are two separate arguments.
const PAIR_KEYS: [&str; 2] = ["domain", "critical"];

fn config_path(argv: &[OsString]) -> Result<Option<OsString>, CliError> {
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return argv
                .get(i + 1)
                .cloned()
                .map(Some)
                .ok_or_else(|| CliError::Config("--config needs a file".into()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some(p.into()));
        }
    }
    Ok(None)
}

fn scalar(v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        other => Err(CliError::Config(format!(
            "unsupported config value {other}"
        ))),
    }
}

/// Flags equivalent to the entries of a parsed config file.
pub fn flags_from_table(table: &toml::Table) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (key, value) in table {
        if key == "config" {
            return Err(CliError::Config(format!(
                "config key `{key}` is not allowed here"
            )));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let items = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                out.push(flag.into());
                if PAIR_KEYS.contains(&key.as_str()) {
                    out.extend(items.into_iter().map(OsString::from));
                } else {
                    out.push(items.join(",").into());
                }
            }
            v => {
                out.push(flag.into());
                out.push(scalar(v)?.into());
            }
        }
    }
    Ok(out)
}

pub fn expand_args(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.to_string_lossy())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.to_string_lossy())))?;
    let flags = flags_from_table(&table)?;
    let at = argv.len().min(2);
    let mut out = argv[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}
