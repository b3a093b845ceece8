//! Token-level annotations and span segmentation.

mod mwe;
mod segment;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AnnotationError, Error, Result};

pub use mwe::MweLexicon;
pub use segment::{segment_spans, span_lemma, span_text};

/// A contiguous, end-exclusive run of tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start < end);
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn tokens(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

impl From<(usize, usize)> for Span {
    fn from((start, end): (usize, usize)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (usize, usize) {
    fn from(s: Span) -> Self {
        (s.start, s.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, String)", into = "(usize, usize, String)")]
pub struct NerSpan {
    pub span: Span,
    pub label: String,
}

impl From<(usize, usize, String)> for NerSpan {
    fn from((start, end, label): (usize, usize, String)) -> Self {
        NerSpan {
            span: Span { start, end },
            label,
        }
    }
}

impl From<NerSpan> for (usize, usize, String) {
    fn from(n: NerSpan) -> Self {
        (n.span.start, n.span.end, n.label)
    }
}

/// One line of the annotation sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    pub id: String,
    pub tokens: Vec<String>,
    pub lemmas: Vec<String>,
    pub pos: Vec<String>,
    #[serde(default, rename = "ner")]
    pub ner_spans: Vec<NerSpan>,
    #[serde(default, rename = "coref")]
    pub coref_chains: Vec<Vec<Span>>,
}

impl AnnotatedSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn validate(&self) -> Result<(), AnnotationError> {
        let n = self.tokens.len();
        for (field, found) in [("lemmas", self.lemmas.len()), ("pos", self.pos.len())] {
            if found != n {
                return Err(AnnotationError::LengthMismatch {
                    id: self.id.clone(),
                    field,
                    expected: n,
                    found,
                });
            }
        }
        let bad_span = |what: &str, s: &Span| AnnotationError::InvalidSpan {
            id: self.id.clone(),
            message: format!("{what} [{}, {}) is outside 0..{n}", s.start, s.end),
        };
        let mut ner: Vec<&Span> = self.ner_spans.iter().map(|e| &e.span).collect();
        ner.sort();
        for s in &ner {
            if s.start >= s.end || s.end > n {
                return Err(bad_span("named entity", s));
            }
        }
        if let Some(w) = ner.windows(2).find(|w| w[0].overlaps(w[1])) {
            return Err(AnnotationError::InvalidSpan {
                id: self.id.clone(),
                message: format!(
                    "named entities [{}, {}) and [{}, {}) overlap",
                    w[0].start, w[0].end, w[1].start, w[1].end
                ),
            });
        }
        for mention in self.coref_chains.iter().flatten() {
            if mention.start >= mention.end || mention.end > n {
                return Err(bad_span("coreference mention", mention));
            }
        }
        Ok(())
    }

    /// Index of the coreference chain with a mention inside `span`. Mentions
    /// wider than the span are clipped to it.
    pub fn coref_chain(&self, span: &Span) -> Option<usize> {
        self.coref_chains
            .iter()
            .position(|chain| chain.len() >= 2 && chain.iter().any(|m| m.overlaps(span)))
    }
}

/// Reads the JSONL annotation sidecar, one validated sentence per line.
pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotatedSentence>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_annotations(&text).map_err(|source| Error::Annotation {
        path: path.to_path_buf(),
        source,
    })
}

pub fn parse_annotations(text: &str) -> Result<Vec<AnnotatedSentence>, AnnotationError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sent: AnnotatedSentence = serde_json::from_str(line).map_err(|e| AnnotationError::Schema {
            line: i + 1,
            message: e.to_string(),
        })?;
        sent.validate()?;
        if !seen.insert(sent.id.clone()) {
            return Err(AnnotationError::DuplicateId(sent.id));
        }
        out.push(sent);
    }
    Ok(out)
}

pub fn write_annotations(sentences: &[AnnotatedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&serde_json::to_string(s).expect("annotation serializes"));
        out.push('\n');
    }
    out
}
