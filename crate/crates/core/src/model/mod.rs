//! Learned parameters and the scoring functions built on them.

mod score;
mod skellam;
mod stats;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ModelError, Result};

pub use score::{
    factorized_backoff, inductive_bias, null_align_prob, projection_distance, reentrancy_key, relation_backoff,
    relation_label, subgraph_label, Scorer, EPSILON,
};
pub use skellam::{ln_bessel_i, ln_factorial, Skellam, MAX_DISTANCE, MIN_RATE, PMF_FLOOR};
pub use stats::{triple_key, CooccurrenceStats};

pub const MODEL_VERSION: u32 = 1;

/// lemma -> label -> probability
pub type AlignTable = BTreeMap<String, BTreeMap<String, f64>>;

pub fn table_lookup(table: &AlignTable, lemma: &str, label: &str) -> Option<f64> {
    table.get(lemma).and_then(|row| row.get(label)).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Subgraph,
    Relation,
    Reentrancy,
}

impl Phase {
    pub const ALL: [Phase; 3] = [Phase::Subgraph, Phase::Relation, Phase::Reentrancy];
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Subgraph => "subgraph",
            Phase::Relation => "relation",
            Phase::Reentrancy => "reentrancy",
        })
    }
}

impl FromStr for Phase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "subgraph" | "subgraphs" => Ok(Phase::Subgraph),
            "relation" | "relations" => Ok(Phase::Relation),
            "reentrancy" | "reentrancies" => Ok(Phase::Reentrancy),
            other => Err(format!("unknown phase `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub lambda_backoff: f64,
    pub lambda_dup: f64,
    /// Additive smoothing for the alignment tables.
    pub smoothing: f64,
    /// Whether the Skellam distance terms take part in scoring.
    pub use_distance: bool,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            lambda_backoff: 0.1,
            lambda_dup: 0.1,
            smoothing: 0.1,
            use_distance: true,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("lambda-backoff", self.lambda_backoff), ("lambda-dup", self.lambda_dup)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(format!("{name} must lie in (0, 1], got {v}"));
            }
        }
        if !(self.smoothing > 0.0 && self.smoothing.is_finite()) {
            return Err(format!("smoothing must be positive, got {}", self.smoothing));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub subgraph: AlignTable,
    pub relation: AlignTable,
    /// Keys are `role type`.
    pub reentrancy: AlignTable,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistanceParams {
    pub subgraph: Skellam,
    pub relation_parent: Skellam,
    pub relation_child: Skellam,
    pub reentrancy_parent: Skellam,
    pub reentrancy_child: Skellam,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub version: u32,
    pub hyperparams: Hyperparams,
    pub trained_phases: Vec<Phase>,
    pub tables: Tables,
    pub skellam: DistanceParams,
    pub cooccurrence: CooccurrenceStats,
    /// Multiword lexicon in effect when the model was trained.
    pub lexicon: Vec<String>,
}

impl ModelParams {
    pub fn new(hyperparams: Hyperparams, cooccurrence: CooccurrenceStats) -> Self {
        ModelParams {
            version: MODEL_VERSION,
            hyperparams,
            trained_phases: Vec::new(),
            tables: Tables::default(),
            skellam: DistanceParams::default(),
            cooccurrence,
            lexicon: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ModelError::Corrupt(e.to_string()))?;
        let found = value
            .get("version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| ModelError::Corrupt("missing version".into()))?;
        if found != MODEL_VERSION as u64 {
            return Err(ModelError::Version {
                found: found.min(u32::MAX as u64) as u32,
                expected: MODEL_VERSION,
            });
        }
        let params: ModelParams = serde_json::from_value(value).map_err(|e| ModelError::Corrupt(e.to_string()))?;
        params.hyperparams.validate().map_err(ModelError::Corrupt)?;
        Ok(params)
    }
}

pub fn save_model(params: &ModelParams, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, params.to_json()).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ModelParams::from_json(&text).map_err(|source| Error::Model {
        path: path.to_path_buf(),
        source,
    })
}
