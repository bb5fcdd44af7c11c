//! JSON datum files.
//!
//! ```json
//! {
//!   "nodes": ["i", "j"],
//!   "a": [[2, -1], [-1, 0]],
//!   "s": [1, 1],
//!   "tau": { "j,1": "1/(1-q^2)", "j,2": "1/(1-q^4)" }
//! }
//! ```
//!
//! `nodes` is optional (default `1..n`). `tau` keys are `"node,level"`;
//! real nodes default to `τ_{i1} = 1/(1 - q_i^2)`, imaginary nodes have no
//! default.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError};
use crate::expr::{parse_scalar, resolve_node, ExprError};
use crate::freealg::Tau;

#[derive(Debug, Error)]
pub enum DatumError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed datum file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("tau key `{0}` must have the form \"node,level\" with level >= 1")]
    TauKey(String),
    #[error("tau entry `{key}`: {source}")]
    TauValue { key: String, source: ExprError },
}

/// On-disk form of a datum.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<String>>,
    pub a: Vec<Vec<i64>>,
    pub s: Vec<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tau: BTreeMap<String, String>,
}

/// A validated datum with its `τ` table.
#[derive(Clone, Debug)]
pub struct LoadedDatum {
    pub datum: CartanDatum,
    pub tau: Tau,
}

impl DatumFile {
    pub fn from_json(text: &str) -> Result<Self, DatumError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, DatumError> {
        let text = std::fs::read_to_string(path).map_err(|source| DatumError::Io { path: path.display().to_string(), source })?;
        DatumFile::from_json(&text)
    }

    /// Validates the matrix and builds the `τ` table.
    pub fn load(&self) -> Result<LoadedDatum, DatumError> {
        let names = self.nodes.clone().unwrap_or_else(|| (1..=self.a.len()).map(|i| i.to_string()).collect());
        let datum = CartanDatum::new(names, self.a.clone(), self.s.clone())?;
        let mut tau = Tau::real_defaults(&datum);
        apply_tau(&datum, &mut tau, &self.tau)?;
        Ok(LoadedDatum { datum, tau })
    }
}

/// Overrides entries of `tau` from a `"node,level" -> expression` table.
pub fn apply_tau(datum: &CartanDatum, tau: &mut Tau, table: &BTreeMap<String, String>) -> Result<(), DatumError> {
    for (key, value) in table {
        let (node, level) = key.rsplit_once(',').ok_or_else(|| DatumError::TauKey(key.clone()))?;
        let i = resolve_node(datum, node.trim()).map_err(|source| DatumError::TauValue { key: key.clone(), source })?;
        let l: u32 = level.trim().parse().map_err(|_| DatumError::TauKey(key.clone()))?;
        if l == 0 {
            return Err(DatumError::TauKey(key.clone()));
        }
        let v = parse_scalar(value).map_err(|source| DatumError::TauValue { key: key.clone(), source })?;
        tau.set(i, l, v);
    }
    Ok(())
}

/// Reads a standalone `τ` override table (a JSON object of the same shape
/// as the `tau` field).
pub fn read_tau_table(path: &Path) -> Result<BTreeMap<String, String>, DatumError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatumError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}
