use serde::{Deserialize, Serialize};

use super::{build_so_pair, SymmetricPairModel};
use crate::error::{Error, Result};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Versioned JSON form of a model, used for golden files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub schema_version: u32,
    pub p_sig: usize,
    pub q_sig: usize,
    pub tau_signs: Vec<i8>,
    pub family_tag: String,
    /// Basis matrices, row-major.
    pub basis: Vec<Vec<Vec<f64>>>,
}

impl ModelDocument {
    pub fn from_model(m: &SymmetricPairModel) -> Self {
        ModelDocument {
            schema_version: MODEL_SCHEMA_VERSION,
            p_sig: m.p_sig(),
            q_sig: m.q_sig(),
            tau_signs: m.tau_signs().to_vec(),
            family_tag: m.family_tag().to_string(),
            basis: m
                .basis()
                .iter()
                .map(|b| b.row_iter().map(|r| r.iter().copied().collect()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("model document: {e}")))
    }

    /// Rebuilds the model and checks that the stored basis matches.
    pub fn to_model(&self) -> Result<SymmetricPairModel> {
        if self.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let m = build_so_pair(self.p_sig, self.q_sig, &self.tau_signs)?;
        if ModelDocument::from_model(&m) != *self {
            return Err(Error::InvalidArgument(
                "stored basis or family tag does not match the rebuilt model".into(),
            ));
        }
        Ok(m)
    }
}
