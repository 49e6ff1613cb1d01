use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::PathBuf;

use super::catalog::{find, CatalogEntry, ParamKind};
use crate::error::{bail, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => bail!(Config, "unknown format {s:?}; expected json or csv"),
        }
    }
}

/// One experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Treat soft envelope violations as failures.
    #[serde(default)]
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            params: BTreeMap::new(),
            seed: 0,
            out: None,
            format: OutputFormat::Json,
            strict: false,
            threads: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Config(format!("invalid config: {e}")))
    }

    /// Checks the experiment name and parameter names and types, and fills
    /// in defaults.
    pub fn validate(&self) -> Result<Params> {
        let Some(entry) = find(&self.experiment) else {
            bail!(Config, "unknown experiment {:?}", self.experiment);
        };
        let mut values = BTreeMap::new();
        for (k, v) in &self.params {
            let Some(spec) = entry.param(k) else {
                let known: Vec<&str> = entry.params.iter().map(|p| p.name.as_str()).collect();
                bail!(Config, "{} does not take parameter {k:?}; known: {known:?}", entry.name);
            };
            values.insert(k.clone(), coerce(spec.kind, k, v)?);
        }
        for spec in &entry.params {
            values.entry(spec.name.clone()).or_insert_with(|| spec.default.clone());
        }
        Ok(Params { entry, values })
    }
}

fn coerce(kind: ParamKind, key: &str, v: &Value) -> Result<Value> {
    let bad = || crate::Error::Config(format!("parameter {key:?} expects {kind:?}, got {v}"));
    if v.is_null() {
        return Ok(Value::Null);
    }
    Ok(match (kind, v) {
        (ParamKind::Int, Value::Number(n)) => Value::from(n.as_u64().ok_or_else(bad)?),
        (ParamKind::Int, Value::String(s)) => Value::from(s.trim().parse::<u64>().map_err(|_| bad())?),
        (ParamKind::Float, Value::Number(n)) => Value::from(n.as_f64().ok_or_else(bad)?),
        (ParamKind::Float, Value::String(s)) => Value::from(s.trim().parse::<f64>().map_err(|_| bad())?),
        (ParamKind::Str, Value::String(s)) => Value::from(s.clone()),
        (ParamKind::Bool, Value::Bool(b)) => Value::from(*b),
        (ParamKind::Bool, Value::String(s)) => Value::from(s.trim().parse::<bool>().map_err(|_| bad())?),
        _ => return Err(bad()),
    })
}

/// Validated parameters with defaults applied.
#[derive(Debug, Clone)]
pub struct Params {
    pub entry: CatalogEntry,
    pub values: BTreeMap<String, Value>,
}

impl Params {
    fn get(&self, key: &str) -> Result<&Value> {
        self.values.get(key).ok_or_else(|| crate::Error::Config(format!("missing parameter {key:?}")))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.get(key)?
            .as_u64()
            .map(|v| v as usize)
            .ok_or_else(|| crate::Error::Config(format!("parameter {key:?} must be a nonnegative integer")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.get(key)?.as_f64().ok_or_else(|| crate::Error::Config(format!("parameter {key:?} must be a number")))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        let v = self.get(key)?;
        if v.is_null() {
            Ok(None)
        } else {
            self.f64(key).map(Some)
        }
    }

    pub fn str(&self, key: &str) -> Result<&str> {
        self.get(key)?.as_str().ok_or_else(|| crate::Error::Config(format!("parameter {key:?} must be a string")))
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        self.get(key)?.as_bool().ok_or_else(|| crate::Error::Config(format!("parameter {key:?} must be a boolean")))
    }
}

/// Parses `key=value`.
pub fn parse_kv(s: &str) -> Result<(String, Value)> {
    let Some((k, v)) = s.split_once('=') else {
        bail!(Config, "expected key=value, got {s:?}");
    };
    Ok((k.trim().to_string(), Value::String(v.to_string())))
}
