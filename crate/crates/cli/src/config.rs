//! Run configuration: a JSON file with environment-variable overrides for
//! secrets (`ORACLE_ENDPOINT`, `ORACLE_API_KEY`, `ORACLE_MODEL`).

use std::path::Path;

use groupsim_core::model::FadingConfig;
use groupsim_core::oracle::{Oracle, StubOracle};
use groupsim_core::runtime::EngineConfig;
use serde::{Deserialize, Serialize};

use crate::remote::RemoteOracle;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    Stub,
    Remote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleSettings {
    pub mode: OracleMode,
    pub temperature: f64,
    pub max_inflight: usize,
    /// Bound of the stub's multiplicative jitter.
    pub stub_jitter: f64,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    /// Never read from the config file in earnest; the env var wins and the
    /// value is redacted when the config is echoed back to disk.
    pub api_key: Option<String>,
}

impl Default for OracleSettings {
    fn default() -> OracleSettings {
        OracleSettings {
            mode: OracleMode::Stub,
            temperature: 0.1,
            max_inflight: 4,
            stub_jitter: 0.05,
            endpoint: None,
            model: None,
            api_key: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationSettings {
    pub layer: u32,
    pub horizon_days: u32,
    pub world_description: String,
}

impl Default for SimulationSettings {
    fn default() -> SimulationSettings {
        SimulationSettings {
            layer: 3,
            horizon_days: 7,
            world_description: EngineConfig::default().world_description,
        }
    }
}

/// Harness configuration; every field has a default so `{}` is a valid file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub schema_version: u32,
    pub oracle: OracleSettings,
    pub reasoning: FadingConfig,
    pub simulation: SimulationSettings,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            schema_version: 1,
            oracle: OracleSettings::default(),
            reasoning: FadingConfig::default(),
            simulation: SimulationSettings::default(),
        }
    }
}

impl RunConfig {
    /// Load from a JSON file, apply env overrides, and validate.
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(&format!("reading config {}", path.display()), e))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        config.apply_env();
        config.validated()
    }

    /// Defaults plus env overrides.
    pub fn from_env() -> Result<RunConfig, CliError> {
        let mut config = RunConfig::default();
        config.apply_env();
        config.validated()
    }

    fn apply_env(&mut self) {
        if let Ok(endpoint) = std::env::var("ORACLE_ENDPOINT") {
            if !endpoint.is_empty() {
                self.oracle.endpoint = Some(endpoint);
            }
        }
        if let Ok(key) = std::env::var("ORACLE_API_KEY") {
            if !key.is_empty() {
                self.oracle.api_key = Some(key);
            }
        }
        if let Ok(model) = std::env::var("ORACLE_MODEL") {
            if !model.is_empty() {
                self.oracle.model = Some(model);
            }
        }
    }

    fn validated(mut self) -> Result<RunConfig, CliError> {
        self.reasoning = self
            .reasoning
            .normalized()
            .map_err(|e| CliError::Validation(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.oracle.stub_jitter) {
            return Err(CliError::Validation(format!(
                "oracle.stub_jitter = {} outside [0, 1]",
                self.oracle.stub_jitter
            )));
        }
        if self.oracle.max_inflight == 0 {
            return Err(CliError::Validation(
                "oracle.max_inflight must be >= 1".into(),
            ));
        }
        Ok(self)
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            fading: self.reasoning.clone(),
            world_description: self.simulation.world_description.clone(),
        }
    }

    /// Construct the configured oracle backend.
    pub fn build_oracle(&self) -> Result<Box<dyn Oracle + Sync + Send>, CliError> {
        match self.oracle.mode {
            OracleMode::Stub => Ok(Box::new(StubOracle::new(self.oracle.stub_jitter))),
            OracleMode::Remote => {
                let endpoint = self.oracle.endpoint.clone().ok_or_else(|| {
                    CliError::Validation(
                        "remote oracle requires oracle.endpoint or ORACLE_ENDPOINT".into(),
                    )
                })?;
                Ok(Box::new(RemoteOracle::new(
                    endpoint,
                    self.oracle.api_key.clone(),
                    self.oracle.model.clone(),
                    self.oracle.temperature,
                    self.oracle.max_inflight,
                )?))
            }
        }
    }

    /// Copy safe to write alongside outputs: the API key is redacted.
    pub fn redacted(&self) -> RunConfig {
        let mut copy = self.clone();
        if copy.oracle.api_key.is_some() {
            copy.oracle.api_key = Some("<redacted>".into());
        }
        copy
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_is_a_valid_config() {
        let config: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(config, RunConfig::default());
    }

    #[test]
    fn alpha_is_normalized_on_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"reasoning": {"alpha": [2.0, 1.0, 1.0]}}"#).unwrap();
        let config = RunConfig::load(&path).unwrap();
        assert_eq!(config.reasoning.alpha, [0.5, 0.25, 0.25]);
    }

    #[test]
    fn bad_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"oracle": {"stub_jitter": 1.5}}"#).unwrap();
        assert!(matches!(
            RunConfig::load(&path),
            Err(CliError::Validation(_))
        ));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(
            RunConfig::load(Path::new("/nonexistent/config.json")),
            Err(CliError::Io(_))
        ));
    }

    #[test]
    fn redaction_hides_the_key() {
        let mut config = RunConfig::default();
        config.oracle.api_key = Some("secret".into());
        assert_eq!(
            config.redacted().oracle.api_key.as_deref(),
            Some("<redacted>")
        );
    }
}
