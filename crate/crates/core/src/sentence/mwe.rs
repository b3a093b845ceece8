use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::amr::{concept_stem, AmrGraph, NodeKind};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../resources/mwe.txt");

/// Environment variable naming a directory that holds `mwe.txt`.
pub const RESOURCES_ENV: &str = "LEAMR_RESOURCES";

/// Concepts that are hyphenated for notational reasons, not because they
/// spell out several words.
const NOTATIONAL: &[&str] = &[
    "multi-sentence",
    "amr-unknown",
    "amr-choice",
    "amr-empty",
    "have-org-role",
    "have-rel-role",
    "have-degree",
    "have-quant",
    "rate-entity",
    "date-interval",
];

/// Lowercase, hyphen-joined lemma sequences of two or more words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MweLexicon {
    entries: BTreeSet<String>,
    max_len: usize,
}

impl MweLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// One entry per line; `#` starts a comment line.
    pub fn from_text(text: &str) -> Self {
        let mut lex = Self::new();
        for line in text.lines() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                lex.insert(line);
            }
        }
        lex
    }

    pub fn builtin() -> Self {
        Self::from_text(BUILTIN)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_text(&text))
    }

    /// The lexicon in `$LEAMR_RESOURCES/mwe.txt`, or the built-in list.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(RESOURCES_ENV) {
            Some(dir) => Self::from_file(PathBuf::from(dir).join("mwe.txt")),
            None => Ok(Self::builtin()),
        }
    }

    /// Adds an entry; returns false for single words and duplicates.
    pub fn insert(&mut self, entry: &str) -> bool {
        let entry = entry.trim().to_lowercase();
        let words = entry.split('-').count();
        if words < 2 || entry.split('-').any(str::is_empty) {
            return false;
        }
        self.max_len = self.max_len.max(words);
        self.entries.insert(entry)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest entry, in words.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn extend(&mut self, other: &MweLexicon) {
        for e in other.entries() {
            self.insert(e);
        }
    }

    /// Compound concepts such as `alma-mater` or `white-collar`.
    pub fn harvest<'a>(graphs: impl IntoIterator<Item = &'a AmrGraph>) -> Self {
        let mut lex = Self::new();
        for g in graphs {
            for node in g.nodes() {
                let NodeKind::Variable { concept } = &node.kind else {
                    continue;
                };
                if concept_stem(concept) != concept {
                    continue;
                }
                let notational = NOTATIONAL.iter().any(|n| concept.starts_with(n))
                    || concept.ends_with("-entity")
                    || concept.ends_with("-quantity");
                let wordlike = concept
                    .split('-')
                    .all(|w| !w.is_empty() && w.chars().all(|c| c.is_ascii_lowercase()));
                if !notational && wordlike {
                    lex.insert(concept);
                }
            }
        }
        lex
    }
}
