use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::InterfaceError;
use crate::clueforge::{GenerateOptions, ProviderConfig};
use crate::gridengine::GenConfig;

pub const DATA_DIR_ENV: &str = "KAREKURUCU_DATA_DIR";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub max_body_bytes: usize,
    pub max_inputs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_body_bytes: 1 << 20, max_inputs: 200 }
    }
}

/// Service settings, usually read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServiceConfig {
    pub listen: String,
    pub data_dir: PathBuf,
    pub provider: ProviderConfig,
    pub clues: GenerateOptions,
    pub generation: GenConfig,
    pub limits: Limits,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: "127.0.0.1:8080".into(),
            data_dir: PathBuf::from("sessions"),
            provider: ProviderConfig::default(),
            clues: GenerateOptions::default(),
            generation: GenConfig::default(),
            limits: Limits::default(),
        }
    }
}

impl ServiceConfig {
    /// Parses TOML, then lets `KAREKURUCU_DATA_DIR` override the data
    /// directory.
    pub fn load(path: Option<&Path>) -> Result<Self, InterfaceError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| InterfaceError::validation(format!("{}: {e}", p.display()), vec![]))?;
                toml::from_str(&text).map_err(|e| InterfaceError::validation(format!("{}: {e}", p.display()), vec![]))?
            }
            None => Self::default(),
        };
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV).filter(|d| !d.is_empty()) {
            cfg.data_dir = PathBuf::from(dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), InterfaceError> {
        if self.limits.max_body_bytes == 0 || self.limits.max_inputs == 0 {
            return Err(InterfaceError::validation("limits must be positive", vec![]));
        }
        self.generation.validate()?;
        self.provider.validate()?;
        Ok(())
    }
}
