//! Run manifests: a JSON record of (experiment, seed, parameters) that is
//! sufficient to reproduce a run byte-for-byte, plus bookkeeping fields
//! (toolkit version, timestamp, wall time) that do not affect results.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub seed: u64,
    pub params: Value,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub created_unix: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration_secs: Option<f64>,
}

const KNOWN_FIELDS: [&str; 6] = [
    "experiment",
    "seed",
    "params",
    "version",
    "created_unix",
    "duration_secs",
];

impl RunManifest {
    pub fn new(experiment: &str, seed: u64, params: &impl Serialize) -> Result<Self> {
        Ok(Self {
            experiment: experiment.to_string(),
            seed,
            params: serde_json::to_value(params)?,
            version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs()),
            duration_secs: None,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates a manifest. Returns the manifest together with
    /// warnings for unknown fields, which are accepted and ignored.
    pub fn parse(text: &str) -> Result<(Self, Vec<String>)> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidManifest("manifest must be a JSON object".into()))?;

        let mut warnings = Vec::new();
        for key in obj.keys() {
            if !KNOWN_FIELDS.contains(&key.as_str()) {
                warnings.push(format!("ignoring unknown manifest field '{key}'"));
            }
        }

        let experiment = obj
            .get("experiment")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidManifest("missing required field 'experiment'".into()))?
            .to_string();
        let seed = obj
            .get("seed")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidManifest("missing required field 'seed'".into()))?;
        let params = obj
            .get("params")
            .cloned()
            .ok_or_else(|| Error::InvalidManifest("missing required field 'params'".into()))?;

        Ok((
            Self {
                experiment,
                seed,
                params,
                version: obj
                    .get("version")
                    .and_then(Value::as_str)
                    .unwrap_or_default()
                    .to_string(),
                created_unix: obj.get("created_unix").and_then(Value::as_u64),
                duration_secs: obj.get("duration_secs").and_then(Value::as_f64),
            },
            warnings,
        ))
    }
}
