//! Plain-text rendering of alignment files for `leamr inspect`.

use std::collections::BTreeMap;
use std::fmt::Write;

use leamr_core::alignment::{EdgeTriple, SubgraphEntry};
use leamr_core::{AlignmentSet, AmrGraph, AnnotatedSentence};

const NULL: &str = "\u{2205}";

fn span_text(sent: &AnnotatedSentence, set: &AlignmentSet, span: usize) -> String {
    match set.spans.get(span) {
        Some(s) => sent
            .tokens
            .get(s.start..s.end.min(sent.tokens.len()))
            .map(|t| t.join(" "))
            .unwrap_or_else(|| format!("<span {span}>")),
        None => format!("<span {span}>"),
    }
}

fn node_label(amr: Option<&AmrGraph>, name: &str) -> String {
    let Some(amr) = amr else {
        return name.to_string();
    };
    match amr.find(name) {
        Some(id) => {
            if amr.node(id).is_constant() {
                amr.label(id).to_string()
            } else {
                format!("{name}/{}", amr.label(id))
            }
        }
        None => name.to_string(),
    }
}

fn edges(list: &[EdgeTriple]) -> String {
    list.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn subgraph_text(amr: Option<&AmrGraph>, entry: &SubgraphEntry) -> String {
    let nodes: Vec<String> = entry.nodes.iter().map(|n| node_label(amr, n)).collect();
    let mut out = nodes.join(", ");
    if !entry.edges.is_empty() {
        let _ = write!(out, " [{}]", edges(&entry.edges));
    }
    out
}

/// The sentence with bracketed multi-token spans, then one block per layer.
pub fn render(set: &AlignmentSet, sent: &AnnotatedSentence, amr: Option<&AmrGraph>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", set.id);
    let shown: Vec<String> = (0..set.spans.len())
        .map(|i| {
            let text = span_text(sent, set, i);
            if set.spans[i].len() > 1 {
                format!("[{text}]")
            } else {
                text
            }
        })
        .collect();
    let _ = writeln!(out, "{}", shown.join(" "));

    let mut by_span: BTreeMap<usize, Vec<&SubgraphEntry>> = BTreeMap::new();
    for e in &set.subgraphs {
        by_span.entry(e.span).or_default().push(e);
    }
    let _ = writeln!(out, "subgraphs:");
    if set.spans.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for i in 0..set.spans.len() {
        let text = span_text(sent, set, i);
        match by_span.get(&i) {
            Some(list) => {
                for e in list {
                    let _ = writeln!(out, "  {text} -> {}", subgraph_text(amr, e));
                }
            }
            None => {
                let _ = writeln!(out, "  {text} -> {NULL}");
            }
        }
    }

    let _ = writeln!(out, "duplicates:");
    if set.duplicates.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for e in &set.duplicates {
        let _ = writeln!(out, "  {} -> {}", span_text(sent, set, e.span), subgraph_text(amr, e));
    }

    let _ = writeln!(out, "relations:");
    if set.relations.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for r in &set.relations {
        let _ = writeln!(out, "  {} -> {}", span_text(sent, set, r.span), edges(&r.edges));
    }

    let _ = writeln!(out, "reentrancies:");
    if set.reentrancies.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for r in &set.reentrancies {
        let _ = writeln!(out, "  {} -> {} ({})", span_text(sent, set, r.span), r.edge, r.kind);
    }
    out
}
