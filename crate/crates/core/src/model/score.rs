//! Log-space scores for each alignment layer.

use std::collections::BTreeSet;

use crate::alignment::ReentrancyType;
use crate::amr::{AmrGraph, EdgeId, NodeId};
use crate::corpus::Instance;
use crate::sentence::{span_lemma, AnnotatedSentence, Span};
use crate::state::AlignmentState;

use super::stats::CooccurrenceStats;
use super::{table_lookup, ModelParams};

/// Floor for unseen factors and labels.
pub const EPSILON: f64 = 1e-8;

const NULL_FLOOR: f64 = 0.01;
const NULL_SPECIAL: f64 = 0.5;
const NULL_REPEATED: f64 = 0.1;

fn ln_floor(p: f64) -> f64 {
    p.max(EPSILON).ln()
}

fn is_punctuation(text: &str) -> bool {
    !text.is_empty()
        && text
            .chars()
            .all(|c| c.is_ascii_punctuation() || matches!(c, '“' | '”' | '‘' | '’' | '—' | '–' | '…' | '«' | '»'))
}

fn inside_parentheses(sent: &AnnotatedSentence, span: &Span) -> bool {
    let mut depth = 0usize;
    for tok in &sent.tokens[..span.start] {
        match tok.as_str() {
            "(" | "-LRB-" => depth += 1,
            ")" | "-RRB-" => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    if depth == 0 {
        return false;
    }
    sent.tokens[span.end..].iter().any(|t| t == ")" || t == "-RRB-")
}

/// Prior probability that a span carries no subgraph.
pub fn null_align_prob(sent: &AnnotatedSentence, spans: &[Span], span: usize, rank: u32) -> f64 {
    let s = &spans[span];
    let text = sent.tokens[s.tokens()].concat();
    if is_punctuation(&text) || inside_parentheses(sent, s) || sent.coref_chain(s).is_some() {
        return NULL_SPECIAL;
    }
    let lemma = span_lemma(sent, s);
    let repeated = spans
        .iter()
        .enumerate()
        .any(|(i, other)| i != span && span_lemma(sent, other) == lemma);
    if repeated {
        return NULL_REPEATED;
    }
    (rank.max(1) as f64).powf(-0.5).max(NULL_FLOOR)
}

/// Signed distance from the span of `from` to the span of `to`.
pub fn projection_distance(state: &AlignmentState, from: NodeId, to: NodeId) -> Option<i64> {
    Some(state.node_span(to)? as i64 - state.node_span(from)? as i64)
}

/// Canonical string for a bag of concepts plus internal triples.
pub fn subgraph_label(amr: &AmrGraph, nodes: &BTreeSet<NodeId>) -> String {
    let mut concepts: Vec<&str> = nodes.iter().map(|&n| amr.label(n)).collect();
    concepts.sort_unstable();
    let mut triples: Vec<String> = amr
        .internal_edges(nodes)
        .into_iter()
        .map(|e| {
            let edge = amr.edge(e);
            format!("{} {} {}", amr.label(edge.parent), edge.role, amr.label(edge.child))
        })
        .collect();
    triples.sort_unstable();
    let mut label = concepts.join(" ");
    if !triples.is_empty() {
        label.push_str(" | ");
        label.push_str(&triples.join("; "));
    }
    label
}

/// λ · Π p̂(root | s) · Π p̂(role, child | parent, s), each factor floored.
pub fn factorized_backoff(
    amr: &AmrGraph,
    nodes: &BTreeSet<NodeId>,
    lemma: &str,
    stats: &CooccurrenceStats,
    lambda: f64,
) -> f64 {
    let internal = amr.internal_edges(nodes);
    let has_parent: BTreeSet<NodeId> = internal.iter().map(|&e| amr.edge(e).child).collect();
    let mut roots: Vec<NodeId> = nodes.iter().copied().filter(|n| !has_parent.contains(n)).collect();
    if roots.is_empty() {
        roots.extend(nodes.iter().next());
    }
    let mut p = lambda;
    for r in roots {
        p *= stats.p_concept(amr.label(r), lemma).max(EPSILON);
    }
    for e in internal {
        let edge = amr.edge(e);
        p *= stats
            .p_triple(amr.label(edge.parent), edge.role.as_str(), amr.label(edge.child), lemma)
            .max(EPSILON);
    }
    p
}

/// Mean of exp(PMI) over the nodes.
pub fn inductive_bias(amr: &AmrGraph, nodes: &BTreeSet<NodeId>, lemma: &str, stats: &CooccurrenceStats) -> f64 {
    if nodes.is_empty() {
        return 1.0;
    }
    nodes.iter().map(|&n| stats.pmi(amr.label(n), lemma).exp()).sum::<f64>() / nodes.len() as f64
}

/// Backoff for unseen relation labels: Π p̂(role | s).
pub fn relation_backoff(amr: &AmrGraph, edges: &BTreeSet<EdgeId>, lemma: &str, stats: &CooccurrenceStats) -> f64 {
    edges
        .iter()
        .map(|&e| stats.p_role(amr.edge(e).role.base(), lemma).max(EPSILON))
        .product()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Scores alignments of one sentence against fixed parameters.
pub struct Scorer<'a> {
    pub inst: &'a Instance,
    pub params: &'a ModelParams,
    null_ln: Vec<f64>,
}

impl<'a> Scorer<'a> {
    pub fn new(inst: &'a Instance, params: &'a ModelParams) -> Self {
        let null_ln = (0..inst.span_count())
            .map(|i| {
                let rank = params.cooccurrence.rank(&inst.lemmas[i]);
                null_align_prob(&inst.sentence, &inst.spans, i, rank).ln()
            })
            .collect();
        Scorer { inst, params, null_ln }
    }

    fn amr(&self) -> &'a AmrGraph {
        &self.inst.amr
    }

    pub fn null_score(&self, span: usize) -> f64 {
        self.null_ln[span]
    }

    /// P_align(g | s): table value, else the factorized backoff.
    pub fn subgraph_align_prob(&self, span: usize, nodes: &BTreeSet<NodeId>) -> f64 {
        let lemma = &self.inst.lemmas[span];
        let label = subgraph_label(self.amr(), nodes);
        table_lookup(&self.params.tables.subgraph, lemma, &label).unwrap_or_else(|| {
            factorized_backoff(
                self.amr(),
                nodes,
                lemma,
                &self.params.cooccurrence,
                self.params.hyperparams.lambda_backoff,
            )
        })
    }

    /// Mean log distance probability over aligned neighbours of `nodes`.
    pub fn subgraph_distance_term(&self, state: &AlignmentState, span: usize, nodes: &BTreeSet<NodeId>) -> f64 {
        if !self.params.hyperparams.use_distance {
            return 0.0;
        }
        let dist = &self.params.skellam.subgraph;
        mean(
            self.amr()
                .neighbors(nodes)
                .into_iter()
                .filter_map(|n| state.node_span(n))
                .map(|s| dist.ln_pmf(s as i64 - span as i64)),
        )
    }

    pub fn score_subgraph(&self, state: &AlignmentState, span: usize, nodes: &BTreeSet<NodeId>) -> f64 {
        let lemma = &self.inst.lemmas[span];
        ln_floor(self.subgraph_align_prob(span, nodes))
            + self.subgraph_distance_term(state, span, nodes)
            + inductive_bias(self.amr(), nodes, lemma, &self.params.cooccurrence).ln()
    }

    /// Score of everything aligned to `span` in the subgraph and duplicate
    /// layers, or the null score when nothing is.
    pub fn score_span_subgraphs(&self, state: &AlignmentState, span: usize) -> f64 {
        let subs: Vec<_> = state
            .subgraphs_at(span)
            .iter()
            .filter(|g| !g.nodes.is_empty())
            .collect();
        if subs.is_empty() {
            return self.null_score(span);
        }
        (subs.len() - 1) as f64 * self.params.hyperparams.lambda_dup.ln()
            + subs
                .iter()
                .map(|g| self.score_subgraph(state, span, &g.nodes))
                .sum::<f64>()
    }

    /// Global score of the subgraph and duplicate layers.
    pub fn subgraph_layer_score(&self, state: &AlignmentState) -> f64 {
        (0..state.span_count())
            .map(|s| self.score_span_subgraphs(state, s))
            .sum()
    }

    /// Sorted role tags: `>` when `span` holds the parent, `<` when it holds
    /// the child, with inverse roles flipped to their forward form.
    pub fn relation_label(&self, state: &AlignmentState, span: usize, edges: &BTreeSet<EdgeId>) -> String {
        relation_label(self.amr(), state, span, edges)
    }

    pub fn score_relation(&self, state: &AlignmentState, span: usize, edges: &BTreeSet<EdgeId>) -> f64 {
        if edges.is_empty() {
            return 0.0;
        }
        let amr = self.amr();
        let lemma = &self.inst.lemmas[span];
        let label = self.relation_label(state, span, edges);
        let p = table_lookup(&self.params.tables.relation, lemma, &label)
            .unwrap_or_else(|| relation_backoff(amr, edges, lemma, &self.params.cooccurrence));
        let mut score = ln_floor(p);
        if self.params.hyperparams.use_distance {
            let d = &self.params.skellam;
            let at = span as i64;
            score += mean(edges.iter().filter_map(|&e| {
                let s = state.node_span(amr.edge(e).parent)?;
                Some(d.relation_parent.ln_pmf(s as i64 - at))
            }));
            score += mean(edges.iter().filter_map(|&e| {
                let s = state.node_span(amr.edge(e).child)?;
                Some(d.relation_child.ln_pmf(s as i64 - at))
            }));
        }
        score
    }

    /// Relation-layer score of one span holding `edges`. A span left with
    /// neither a subgraph nor a relation keeps its null score.
    pub fn score_relation_span(&self, state: &AlignmentState, span: usize, edges: &BTreeSet<EdgeId>) -> f64 {
        if edges.is_empty() {
            return if state.span_is_aligned(span) {
                0.0
            } else {
                self.null_score(span)
            };
        }
        self.score_relation(state, span, edges)
    }

    pub fn relation_layer_score(&self, state: &AlignmentState) -> f64 {
        (0..state.span_count())
            .map(|s| self.score_relation_span(state, s, state.relations_at(s)))
            .sum()
    }

    pub fn score_reentrancy(&self, state: &AlignmentState, e: EdgeId, span: usize, kind: ReentrancyType) -> f64 {
        let amr = self.amr();
        let edge = amr.edge(e);
        let lemma = &self.inst.lemmas[span];
        let key = reentrancy_key(edge.role.as_str(), kind);
        let p = table_lookup(&self.params.tables.reentrancy, lemma, &key)
            .unwrap_or_else(|| self.params.cooccurrence.p_role(edge.role.base(), lemma));
        let mut score = ln_floor(p);
        if self.params.hyperparams.use_distance {
            let d = &self.params.skellam;
            let at = span as i64;
            if let Some(s) = state.node_span(edge.parent) {
                score += d.reentrancy_parent.ln_pmf(s as i64 - at);
            }
            if let Some(s) = state.node_span(edge.child) {
                score += d.reentrancy_child.ln_pmf(s as i64 - at);
            }
        }
        score
    }
}

pub fn reentrancy_key(role: &str, kind: ReentrancyType) -> String {
    format!("{role} {kind}")
}

pub fn relation_label(amr: &AmrGraph, state: &AlignmentState, span: usize, edges: &BTreeSet<EdgeId>) -> String {
    let mut tags: Vec<String> = edges
        .iter()
        .map(|&e| {
            let edge = amr.edge(e);
            let dir = if state.node_span(edge.parent) == Some(span) {
                Some('>')
            } else if state.node_span(edge.child) == Some(span) {
                Some('<')
            } else {
                None
            };
            let (dir, role) = if edge.role.is_inverse() {
                let flipped = dir.map(|d| if d == '>' { '<' } else { '>' });
                (flipped, edge.role.base())
            } else {
                (dir, edge.role.as_str())
            };
            match dir {
                Some(d) => format!("{d}{role}"),
                None => role.to_string(),
            }
        })
        .collect();
    tags.sort_unstable();
    tags.join(" ")
}
