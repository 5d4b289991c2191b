//! JSON exchange form of a model with a valuation:
//!
//! ```json
//! {"universe":["x","y"],"relations":{"r":[["y","x"]]},"valuation":{"x":"x","y":"y"}}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Model, PairSet, Valuation};
use crate::formulas::ObjVar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub universe: Vec<String>,
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    pub valuation: BTreeMap<String, String>,
}

#[derive(Debug, Error)]
pub enum ExchangeError {
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("element `{0}` is not in the universe")]
    UnknownElement(String),
    #[error("element `{0}` is listed twice in the universe")]
    DuplicateElement(String),
    #[error("the universe is empty")]
    EmptyUniverse,
}

impl ModelFile {
    pub fn from_model(m: &Model, v: &Valuation) -> Self {
        let name = |i: usize| m.universe()[i].to_string();
        ModelFile {
            universe: m.universe().iter().map(|e| e.to_string()).collect(),
            relations: m
                .relations()
                .map(|(r, rel)| (r.to_string(), rel.pairs().map(|(a, b)| [name(a), name(b)]).collect()))
                .collect(),
            valuation: v.iter().map(|(k, e)| (k.to_string(), name(*e))).collect(),
        }
    }

    pub fn to_model(&self) -> Result<(Model, Valuation), ExchangeError> {
        if self.universe.is_empty() {
            return Err(ExchangeError::EmptyUniverse);
        }
        let mut index = BTreeMap::new();
        for (i, e) in self.universe.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(ExchangeError::DuplicateElement(e.clone()));
            }
        }
        let lookup = |e: &String| {
            index
                .get(e.as_str())
                .copied()
                .ok_or_else(|| ExchangeError::UnknownElement(e.clone()))
        };
        let n = self.universe.len();
        let mut m = Model::new(self.universe.iter().map(|e| Arc::from(e.as_str())).collect());
        for (r, pairs) in &self.relations {
            let mut rel = PairSet::empty(n);
            for [a, b] in pairs {
                rel.insert(lookup(a)?, lookup(b)?);
            }
            m.interpret(r, rel);
        }
        let mut v = Valuation::new();
        for (k, e) in &self.valuation {
            v.insert(ObjVar::new(k), lookup(e)?);
        }
        Ok((m, v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ExchangeError> {
        Ok(serde_json::from_str(text)?)
    }
}
