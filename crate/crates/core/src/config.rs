//! JSON model configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::FssqmError;
use crate::fock::{build_fock_rep, StructureFunctionSpec};
use crate::function::ComponentFunction;
use crate::model::FssqmModel;
use crate::verifier::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub lambda: usize,
    pub fock_dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub structure_function: StructureFunctionSpec,
    pub f: Vec<ComponentFunction>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid config at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid tolerance {0}: must be a positive finite number")]
    Tolerance(f64),

    #[error(transparent)]
    Model(#[from] FssqmError),
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    /// Reference model: oscillator structure function, `f_i ≡ 1`.
    pub fn reference(lambda: usize, fock_dimension: usize) -> Self {
        Self {
            lambda,
            fock_dimension,
            tolerance: None,
            structure_function: StructureFunctionSpec::Oscillator,
            f: vec![ComponentFunction::one(); lambda],
        }
    }

    /// The tolerance in effect: `override_tol`, else the config value, else
    /// the default.
    pub fn effective_tolerance(&self, override_tol: Option<f64>) -> Result<f64, ConfigError> {
        let tol = override_tol.or(self.tolerance).unwrap_or(DEFAULT_TOL);
        if tol.is_finite() && tol > 0.0 {
            Ok(tol)
        } else {
            Err(ConfigError::Tolerance(tol))
        }
    }

    pub fn build(&self) -> Result<FssqmModel, ConfigError> {
        if self.lambda < 2 {
            return Err(FssqmError::InvalidLambda(self.lambda).into());
        }
        if self.f.len() != self.lambda {
            return Err(FssqmError::LengthMismatch {
                what: "component functions in f",
                expected: self.lambda,
                actual: self.f.len(),
            }
            .into());
        }
        let rep = build_fock_rep(&self.structure_function, self.lambda, self.fock_dimension)?;
        Ok(FssqmModel::build(rep, self.f.clone())?)
    }
}
