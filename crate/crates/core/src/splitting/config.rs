//! JSON description of an extension model.
//!
//! ```json
//! {"variant": "abelian", "modulus": 4, "residues": [1]}
//! {"variant": "splitting_field", "poly": [-2, 0, 0, 1], "galois_order": 6}
//! ```
//!
//! `poly` lists coefficients constant term first. `bad_primes` is optional
//! for the polynomial variant; when absent the bad set is derived from the
//! discriminant.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GaloisExtensionModel, SplitError, SplittingFieldModel};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    /// `message` carries the position when the parser knows it.
    #[error("malformed model: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] SplitError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Abelian {
        modulus: u64,
        residues: Vec<u64>,
    },
    SplittingField {
        poly: Vec<i64>,
        galois_order: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bad_primes: Option<Vec<u64>>,
    },
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn build(&self) -> Result<GaloisExtensionModel, SplitError> {
        match self {
            ModelConfig::Abelian { modulus, residues } => {
                GaloisExtensionModel::abelian(*modulus, residues.iter().copied())
            }
            ModelConfig::SplittingField {
                poly,
                galois_order,
                bad_primes,
            } => SplittingFieldModel::new(
                poly.clone(),
                *galois_order,
                bad_primes.iter().flatten().copied(),
            )
            .map(GaloisExtensionModel::SplittingField),
        }
    }
}

pub fn parse_model(text: &str) -> Result<GaloisExtensionModel, ConfigError> {
    Ok(ModelConfig::from_json(text)?.build()?)
}

pub fn load_model(path: &Path) -> Result<GaloisExtensionModel, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_variants() {
        let a = parse_model(r#"{"variant": "abelian", "modulus": 4, "residues": [1]}"#).unwrap();
        assert_eq!(a.degree(), 2);
        let s = parse_model(r#"{"variant": "splitting_field", "poly": [-2, 0, 0, 1], "galois_order": 6}"#)
            .unwrap();
        assert_eq!(s.degree(), 6);
        let b = parse_model(
            r#"{"variant": "splitting_field", "poly": [1, 0, 1], "galois_order": 2, "bad_primes": [2, 7]}"#,
        )
        .unwrap();
        assert!(b.is_ramified(7));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ModelConfig::from_json("{\n  \"variant\": \"abelian\",\n  \"modulus\": 4,\n}").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_and_unknown_fields_are_named() {
        let err = ModelConfig::from_json(r#"{"variant": "abelian", "modulus": 4}"#).unwrap_err();
        assert!(err.to_string().contains("residues"), "{err}");
        let err = ModelConfig::from_json(r#"{"variant": "abelian", "modulus": 4, "residues": [1], "extra": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        let err = ModelConfig::from_json(r#"{"variant": "cyclic"}"#).unwrap_err();
        assert!(err.to_string().contains("cyclic"), "{err}");
    }

    #[test]
    fn non_subgroup_rejected_at_load() {
        let err = parse_model(r#"{"variant": "abelian", "modulus": 7, "residues": [1, 3]}"#).unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid(SplitError::InvalidModel { field: "residues", .. })
        ));
    }

    #[test]
    fn serializes_back() {
        let cfg = ModelConfig::SplittingField {
            poly: vec![1, 0, 1],
            galois_order: 2,
            bad_primes: None,
        };
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(json, r#"{"variant":"splitting_field","poly":[1,0,1],"galois_order":2}"#);
        assert_eq!(ModelConfig::from_json(&json).unwrap(), cfg);
    }
}
