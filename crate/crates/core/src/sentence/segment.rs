use super::{AnnotatedSentence, MweLexicon, Span};
use crate::amr::AmrGraph;

/// Groups tokens into spans. Multi-token spans come from, in priority order:
/// token sequences spelling a name in the graph, named entities, and the
/// longest lexicon match scanning left to right. Everything else is a
/// singleton.
pub fn segment_spans(sent: &AnnotatedSentence, amr: &AmrGraph, mwe: &MweLexicon) -> Vec<Span> {
    let n = sent.len();
    let mut taken = vec![false; n];
    let mut spans = Vec::new();
    let claim = |span: Span, taken: &mut Vec<bool>, spans: &mut Vec<Span>| {
        if span.len() >= 2 && span.end <= n && !taken[span.tokens()].iter().any(|&t| t) {
            taken[span.tokens()].iter_mut().for_each(|t| *t = true);
            spans.push(span);
        }
    };

    for node in amr.node_ids() {
        let Some(name) = amr.name_tokens(node) else {
            continue;
        };
        if name.len() < 2 || name.len() > n {
            continue;
        }
        for start in 0..=n - name.len() {
            let window = &sent.tokens[start..start + name.len()];
            if window.iter().zip(&name).all(|(t, op)| t == op) {
                claim(Span::new(start, start + name.len()), &mut taken, &mut spans);
            }
        }
    }

    for ner in &sent.ner_spans {
        claim(ner.span, &mut taken, &mut spans);
    }

    let lemmas: Vec<String> = sent.lemmas.iter().map(|l| l.to_lowercase()).collect();
    let words: Vec<String> = sent.tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut i = 0;
    while i < n {
        let longest = (2..=mwe.max_len().min(n - i)).rev().find(|&len| {
            !taken[i..i + len].iter().any(|&t| t)
                && (mwe.contains(&lemmas[i..i + len].join("-")) || mwe.contains(&words[i..i + len].join("-")))
        });
        match longest {
            Some(len) => {
                claim(Span::new(i, i + len), &mut taken, &mut spans);
                i += len;
            }
            None => i += 1,
        }
    }

    for (i, t) in taken.iter().enumerate() {
        if !t {
            spans.push(Span::new(i, i + 1));
        }
    }
    spans.sort();
    spans
}

/// Lowercase lemma; multi-token spans join their lemmas with hyphens.
pub fn span_lemma(sent: &AnnotatedSentence, span: &Span) -> String {
    sent.lemmas[span.tokens()]
        .iter()
        .map(|l| l.to_lowercase())
        .collect::<Vec<_>>()
        .join("-")
}

/// Surface tokens joined by spaces.
pub fn span_text(sent: &AnnotatedSentence, span: &Span) -> String {
    sent.tokens[span.tokens()].join(" ")
}
