//! `--config <json>` support: keys of a flat JSON object become long flags
//! unless the same flag is already on the command line.

use std::ffi::OsString;

use serde_json::Value;

use crate::CliError;

/// Rewrites `args` with the config file's entries appended as flags.
///
/// Strings and numbers become `--key value`, arrays become a comma-joined
/// value, `true` becomes a bare `--key`, and `false` or `null` are dropped.
pub fn inject_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.to_string_lossy().starts_with("--config="))
    else {
        return Ok(args);
    };
    let flag = args[pos].to_string_lossy().into_owned();
    let (path, consumed) = match flag.strip_prefix("--config=") {
        Some(p) => (p.to_owned(), 1),
        None => {
            let p = args
                .get(pos + 1)
                .ok_or_else(|| CliError::Validation("--config needs a path".into()))?;
            (p.to_string_lossy().into_owned(), 2)
        }
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::Validation(format!(
            "{path}: line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    let Value::Object(map) = value else {
        return Err(CliError::Validation(format!(
            "{path}: config must be a JSON object"
        )));
    };

    let mut out: Vec<OsString> = args[..pos]
        .iter()
        .chain(&args[pos + consumed..])
        .cloned()
        .collect();
    let present = |out: &[OsString], key: &str| {
        let long = format!("--{key}");
        let prefix = format!("--{key}=");
        out.iter().any(|a| {
            let a = a.to_string_lossy();
            a == long || a.starts_with(&prefix)
        })
    };
    for (key, value) in map {
        if present(&out, &key) {
            continue;
        }
        let rendered = match value {
            Value::Null | Value::Bool(false) => continue,
            Value::Bool(true) => None,
            Value::String(s) => Some(s),
            Value::Number(n) => Some(n.to_string()),
            Value::Array(items) => Some(
                items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) => Ok(n.to_string()),
                        _ => Err(CliError::Validation(format!(
                            "{path}: field `{key}`: unsupported array entry"
                        ))),
                    })
                    .collect::<Result<Vec<_>, _>>()?
                    .join(","),
            ),
            Value::Object(_) => {
                return Err(CliError::Validation(format!(
                    "{path}: field `{key}`: nested objects are not flags"
                )))
            }
        };
        out.push(format!("--{key}").into());
        if let Some(v) = rendered {
            out.push(v.into());
        }
    }
    Ok(out)
}
