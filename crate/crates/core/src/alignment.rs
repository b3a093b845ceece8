//! The per-sentence alignment file format.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sentence::Span;

/// An edge written as `[parent, role, child]` using node ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeTriple(pub String, pub String, pub String);

impl fmt::Display for EdgeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0, self.1, self.2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReentrancyType {
    Primary,
    Coref,
    Repetition,
    Coordination,
    Control,
    AdjunctControl,
    UnmarkedAdjunctControl,
    ComparativeControl,
    Pragmatic,
}

impl ReentrancyType {
    pub const ALL: [ReentrancyType; 9] = [
        ReentrancyType::Primary,
        ReentrancyType::Coref,
        ReentrancyType::Repetition,
        ReentrancyType::Coordination,
        ReentrancyType::Control,
        ReentrancyType::AdjunctControl,
        ReentrancyType::UnmarkedAdjunctControl,
        ReentrancyType::ComparativeControl,
        ReentrancyType::Pragmatic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReentrancyType::Primary => "primary",
            ReentrancyType::Coref => "coref",
            ReentrancyType::Repetition => "repetition",
            ReentrancyType::Coordination => "coordination",
            ReentrancyType::Control => "control",
            ReentrancyType::AdjunctControl => "adjunct-control",
            ReentrancyType::UnmarkedAdjunctControl => "unmarked-adjunct-control",
            ReentrancyType::ComparativeControl => "comparative-control",
            ReentrancyType::Pragmatic => "pragmatic",
        }
    }
}

impl fmt::Display for ReentrancyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphEntry {
    pub span: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeTriple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEntry {
    pub span: usize,
    pub edges: Vec<EdgeTriple>,
    /// One entry per edge, when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReentrancyEntry {
    pub span: usize,
    pub edge: EdgeTriple,
    #[serde(rename = "type")]
    pub kind: ReentrancyType,
}

/// All four alignment layers for one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignmentSet {
    pub id: String,
    pub spans: Vec<Span>,
    #[serde(default)]
    pub subgraphs: Vec<SubgraphEntry>,
    #[serde(default)]
    pub duplicates: Vec<SubgraphEntry>,
    #[serde(default)]
    pub relations: Vec<RelationEntry>,
    #[serde(default)]
    pub reentrancies: Vec<ReentrancyEntry>,
}

impl AlignmentSet {
    pub fn empty(id: impl Into<String>, spans: Vec<Span>) -> Self {
        AlignmentSet {
            id: id.into(),
            spans,
            subgraphs: Vec::new(),
            duplicates: Vec::new(),
            relations: Vec::new(),
            reentrancies: Vec::new(),
        }
    }
}

pub fn read_alignments(path: impl AsRef<Path>) -> Result<Vec<AlignmentSet>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn alignments_to_json(sets: &[AlignmentSet]) -> String {
    let mut s = serde_json::to_string_pretty(sets).expect("alignments serialize");
    s.push('\n');
    s
}

pub fn write_alignments(path: impl AsRef<Path>, sets: &[AlignmentSet]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, alignments_to_json(sets)).map_err(|e| Error::io(path, e))
}
