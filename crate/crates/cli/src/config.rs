use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or input data.
    Validation(String),
    /// Search budget exhausted or a solver did not converge.
    Budget(String),
    Io(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Budget(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<nodal_lab::Error> for CliError {
    fn from(e: nodal_lab::Error) -> Self {
        use nodal_lab::Error as E;
        match e {
            E::InvalidArgument(_)
            | E::NotRepresentable(_)
            | E::Degenerate(_)
            | E::NotNormalized(_)
            | E::InvalidMeasure(_) => CliError::Validation(e.to_string()),
            E::BudgetExceeded { .. } | E::NotConverged(_) => CliError::Budget(e.to_string()),
            E::Internal(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Parameters shared by every command: the optional config file.
pub struct Ctx {
    pub file: Option<Map<String, Value>>,
}

impl Ctx {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self { file: None });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| validation(format!("cannot read config {}: {e}", path.display())))?;
        match serde_json::from_str(&text) {
            Ok(Value::Object(map)) => Ok(Self { file: Some(map) }),
            Ok(_) => Err(validation("config file must hold a JSON object")),
            Err(e) => Err(validation(format!("config {}: {e}", path.display()))),
        }
    }

    /// Merges flags over the config file over `defaults`, field by field.
    ///
    /// Returns the merged arguments and the effective configuration, with
    /// unset optional fields dropped. Config keys that the command does not
    /// know are rejected.
    pub fn resolve<T: Serialize + DeserializeOwned>(
        &self,
        flags: &T,
        defaults: Value,
    ) -> CliResult<(T, Value)> {
        let Value::Object(flag_map) =
            serde_json::to_value(flags).map_err(|e| CliError::Internal(e.to_string()))?
        else {
            return Err(CliError::Internal(
                "arguments must serialize to an object".into(),
            ));
        };
        let empty = Map::new();
        let file = self.file.as_ref().unwrap_or(&empty);
        if let Some(key) = file.keys().find(|k| !flag_map.contains_key(*k)) {
            return Err(validation(format!(
                "unknown config key '{key}' for this command"
            )));
        }
        let Value::Object(defaults) = defaults else {
            return Err(CliError::Internal("defaults must be an object".into()));
        };
        debug_assert!(
            defaults.keys().all(|k| flag_map.contains_key(k)),
            "default for unknown key"
        );
        let mut merged = Map::new();
        for (key, flag) in flag_map {
            let value = [Some(&flag), file.get(&key), defaults.get(&key)]
                .into_iter()
                .flatten()
                .find(|v| !v.is_null())
                .cloned()
                .unwrap_or(Value::Null);
            merged.insert(key, value);
        }
        let args: T = serde_json::from_value(Value::Object(merged.clone()))
            .map_err(|e| validation(e.to_string()))?;
        merged.retain(|_, v| !v.is_null());
        Ok((args, Value::Object(merged)))
    }
}

pub fn need<T: Clone>(value: &Option<T>, name: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| validation(format!("missing required --{}", name.replace('_', "-"))))
}

pub fn need_pair(value: &Option<Vec<f64>>, name: &str) -> CliResult<[f64; 2]> {
    match need(value, name)?.as_slice() {
        &[a, b] => Ok([a, b]),
        other => Err(validation(format!(
            "--{name} takes two comma-separated numbers, got {}",
            other.len()
        ))),
    }
}

/// Merges the keys of `b` into the object `a`.
pub fn merged(mut a: Value, b: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut a, b) {
        a.extend(b);
    }
    a
}

#[cfg(test)]
mod tests {
    use serde::Deserialize;
    use serde_json::json;

    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Flags {
        a: Option<u32>,
        b: Option<f64>,
        c: Option<String>,
    }

    fn ctx(file: Value) -> Ctx {
        let Value::Object(m) = file else {
            unreachable!()
        };
        Ctx { file: Some(m) }
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let flags = Flags {
            a: Some(1),
            b: None,
            c: None,
        };
        let (got, config) = ctx(json!({ "a": 7, "b": 2.5 }))
            .resolve(&flags, json!({ "a": 9, "b": 0.0, "c": "d" }))
            .unwrap();
        assert_eq!(
            (got.a, got.b, got.c.as_deref()),
            (Some(1), Some(2.5), Some("d"))
        );
        assert_eq!(config, json!({ "a": 1, "b": 2.5, "c": "d" }));
    }

    #[test]
    fn unset_optionals_leave_the_config() {
        let flags = Flags {
            a: None,
            b: None,
            c: None,
        };
        let (got, config) = Ctx { file: None }
            .resolve(&flags, json!({ "a": 3 }))
            .unwrap();
        assert!(got.b.is_none());
        assert_eq!(config, json!({ "a": 3 }));
    }

    #[test]
    fn rejects_unknown_and_mistyped_keys() {
        let flags = Flags {
            a: None,
            b: None,
            c: None,
        };
        assert!(matches!(
            ctx(json!({ "z": 1 })).resolve(&flags, json!({})),
            Err(CliError::Validation(_))
        ));
        assert!(matches!(
            ctx(json!({ "a": "x" })).resolve(&flags, json!({})),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn library_errors_map_to_exit_codes() {
        assert_eq!(
            CliError::from(nodal_lab::Error::NotRepresentable(3)).exit_code(),
            2
        );
        assert_eq!(
            CliError::from(nodal_lab::Error::BudgetExceeded {
                estimated: 2,
                budget: 1
            })
            .exit_code(),
            3
        );
        assert_eq!(
            CliError::from(nodal_lab::Error::NotConverged("x".into())).exit_code(),
            3
        );
    }
}
