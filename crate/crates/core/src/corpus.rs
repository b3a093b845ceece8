//! Pairing AMR graphs with their sentence annotations.

use std::collections::HashMap;
use std::path::Path;

use crate::amr::{read_corpus, AmrGraph};
use crate::error::{Error, Result};
use crate::sentence::{load_annotations, segment_spans, span_lemma, AnnotatedSentence, MweLexicon, Span};

/// A sentence, its graph and its span segmentation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub amr: AmrGraph,
    pub sentence: AnnotatedSentence,
    pub spans: Vec<Span>,
    /// `span_lemma` of each span.
    pub lemmas: Vec<String>,
}

impl Instance {
    pub fn new(amr: AmrGraph, sentence: AnnotatedSentence, mwe: &MweLexicon) -> Self {
        let spans = segment_spans(&sentence, &amr, mwe);
        Self::with_spans(amr, sentence, spans)
    }

    pub fn with_spans(amr: AmrGraph, sentence: AnnotatedSentence, spans: Vec<Span>) -> Self {
        let lemmas = spans.iter().map(|s| span_lemma(&sentence, s)).collect();
        Instance {
            amr,
            sentence,
            spans,
            lemmas,
        }
    }

    pub fn id(&self) -> &str {
        self.amr.id()
    }

    pub fn span_count(&self) -> usize {
        self.spans.len()
    }

    pub fn span_text(&self, span: usize) -> String {
        self.sentence.tokens[self.spans[span].tokens()].join(" ")
    }

    /// Penn tag of a single-token span; the last token's tag otherwise.
    pub fn span_pos(&self, span: usize) -> &str {
        &self.sentence.pos[self.spans[span].end - 1]
    }

    /// Span index containing a token.
    pub fn span_of_token(&self, token: usize) -> Option<usize> {
        self.spans.iter().position(|s| s.tokens().contains(&token))
    }
}

/// Result of matching graphs to annotations by id.
#[derive(Debug)]
pub struct JoinedCorpus {
    pub instances: Vec<Instance>,
    /// Graph ids with no annotation line.
    pub missing: Vec<String>,
}

/// Pairs graphs with annotations by sentence id, in graph order.
pub fn join_corpus(amrs: Vec<AmrGraph>, sentences: Vec<AnnotatedSentence>, mwe: &MweLexicon) -> JoinedCorpus {
    let mut by_id: HashMap<String, AnnotatedSentence> = sentences.into_iter().map(|s| (s.id.clone(), s)).collect();
    let mut instances = Vec::new();
    let mut missing = Vec::new();
    for amr in amrs {
        match by_id.remove(amr.id()) {
            Some(sent) => instances.push(Instance::new(amr, sent, mwe)),
            None => missing.push(amr.id().to_string()),
        }
    }
    JoinedCorpus { instances, missing }
}

/// Loads both files; any graph without annotations is an error.
pub fn load_corpus(amr_path: impl AsRef<Path>, anno_path: impl AsRef<Path>, mwe: &MweLexicon) -> Result<Vec<Instance>> {
    let joined = load_corpus_lenient(amr_path, anno_path, mwe)?;
    if !joined.missing.is_empty() {
        return Err(Error::IdMismatch(joined.missing.join(", ")));
    }
    Ok(joined.instances)
}

pub fn load_corpus_lenient(
    amr_path: impl AsRef<Path>,
    anno_path: impl AsRef<Path>,
    mwe: &MweLexicon,
) -> Result<JoinedCorpus> {
    let amrs = read_corpus(amr_path)?;
    let sentences = load_annotations(anno_path)?;
    Ok(join_corpus(amrs, sentences, mwe))
}
