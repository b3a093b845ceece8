//! Typing and anchoring the non-primary edges of reentrant nodes.

use crate::alignment::ReentrancyType;
use crate::amr::{AmrGraph, EdgeId, NodeId};
use crate::model::Scorer;
use crate::state::AlignmentState;

const PRONOUN_POS: &[&str] = &["PRP", "PRP$"];

const PRONOUNS: &[(&str, &[&str])] = &[
    ("i", &["i", "me", "my", "mine", "myself"]),
    ("we", &["we", "us", "our", "ours", "ourselves"]),
    ("you", &["you", "your", "yours", "yourself", "yourselves"]),
    ("he", &["he", "him", "his", "himself"]),
    ("she", &["she", "her", "hers", "herself"]),
    ("it", &["it", "its", "itself"]),
    ("they", &["they", "them", "their", "theirs", "themselves"]),
];

const COORDINATORS: &[&str] = &["and", "or", "contrast-01", "either", "neither"];
const ADJUNCT_ROLES: &[&str] = &[":purpose", ":time", ":manner", ":condition", ":duration"];
const MARKER_POS: &[&str] = &["IN", "TO", "WRB"];
const DEGREE_CONCEPTS: &[&str] = &["have-degree-91", "have-quant-91"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReentrancyStep {
    pub edge: EdgeId,
    pub span: usize,
    pub kind: ReentrancyType,
    pub score: f64,
}

struct Ctx<'a> {
    scorer: &'a Scorer<'a>,
    state: &'a AlignmentState,
}

impl Ctx<'_> {
    fn amr(&self) -> &AmrGraph {
        &self.scorer.inst.amr
    }

    fn has_pos(&self, span: usize, tags: &[&str]) -> bool {
        let inst = self.scorer.inst;
        inst.sentence.pos[inst.spans[span].tokens()]
            .iter()
            .any(|p| tags.contains(&p.as_str()))
    }

    fn lower(&self, span: usize) -> String {
        self.scorer.inst.span_text(span).to_lowercase()
    }

    fn ancestor_or_self(&self, a: NodeId, n: NodeId) -> bool {
        a == n || self.amr().is_tree_ancestor(a, n)
    }

    fn has_child(&self, x: NodeId, c: NodeId) -> bool {
        self.amr().outgoing(x).iter().any(|&e| self.amr().edge(e).child == c)
    }

    fn coref(&self, span: usize, r: NodeId) -> bool {
        if !self.has_pos(span, PRONOUN_POS) {
            return false;
        }
        let inst = self.scorer.inst;
        let sent = &inst.sentence;
        if let (Some(a), Some(rs)) = (sent.coref_chain(&inst.spans[span]), self.state.node_span(r)) {
            if rs != span && sent.coref_chain(&inst.spans[rs]) == Some(a) {
                return true;
            }
        }
        let word = self.lower(span);
        let concept = self.amr().label(r);
        match PRONOUNS.iter().find(|(_, forms)| forms.contains(&word.as_str())) {
            Some((pron, _)) if *pron == concept => true,
            Some((pron, _)) => matches!(*pron, "he" | "she" | "it" | "they") && !matches!(concept, "i" | "we" | "you"),
            None => false,
        }
    }

    fn repetition(&self, span: usize, r: NodeId) -> bool {
        let inst = self.scorer.inst;
        let Some(rs) = self.state.node_span(r) else {
            return false;
        };
        if rs == span || self.has_pos(span, PRONOUN_POS) {
            return false;
        }
        if inst.lemmas[span] == inst.lemmas[rs] {
            return true;
        }
        let amr = self.amr();
        amr.child_by_role(r, ":name")
            .and_then(|n| amr.name_tokens(n))
            .is_some_and(|t| t.join(" ") == inst.span_text(span))
    }

    fn aligned_nodes(&self, span: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.state
            .subgraphs_at(span)
            .iter()
            .flat_map(|g| g.nodes.iter().copied())
    }

    fn coordination(&self, span: usize, q: NodeId, q_primary: NodeId) -> bool {
        self.aligned_nodes(span).any(|a| {
            COORDINATORS.contains(&self.amr().label(a))
                && self.ancestor_or_self(a, q)
                && self.ancestor_or_self(a, q_primary)
        })
    }

    fn control(&self, span: usize, q: NodeId, r: NodeId) -> bool {
        self.aligned_nodes(span)
            .any(|x| x != q && self.has_child(x, r) && self.has_child(x, q))
    }

    /// Span of a marker relation linking `q` to a clause that also takes `r`.
    fn adjunct_marker(&self, q: NodeId, r: NodeId) -> Vec<usize> {
        let amr = self.amr();
        amr.edge_ids()
            .filter(|&f| {
                let edge = amr.edge(f);
                let (parent, role, child) = edge.normalized();
                ADJUNCT_ROLES.contains(&role) && child == q && self.has_child(parent, r)
            })
            .filter_map(|f| {
                let s = self.state.relation_span(f)?;
                let edge = amr.edge(f);
                let own = [self.state.node_span(edge.parent), self.state.node_span(edge.child)];
                (!own.contains(&Some(s)) && self.has_pos(s, MARKER_POS)).then_some(s)
            })
            .collect()
    }

    fn unmarked_adjunct(&self, q: NodeId, r: NodeId) -> Option<usize> {
        let amr = self.amr();
        let qs = self.state.node_span(q)?;
        if !self.has_pos(qs, &["VBG", "VB", "VBN"]) {
            return None;
        }
        let attached = amr.edge_ids().any(|f| {
            let (parent, role, child) = amr.edge(f).normalized();
            child == q
                && self.has_child(parent, r)
                && !role.starts_with(":ARG")
                && !role.starts_with(":op")
                && self.state.relation_span(f).is_none_or(|s| {
                    Some(s) == self.state.node_span(amr.edge(f).parent)
                        || Some(s) == self.state.node_span(amr.edge(f).child)
                })
        });
        attached.then_some(qs)
    }

    fn comparative(&self, span: usize, q: NodeId) -> bool {
        let word = self.lower(span);
        if word != "as" && word != "than" {
            return false;
        }
        let amr = self.amr();
        let mut cur = Some(q);
        while let Some(n) = cur {
            if DEGREE_CONCEPTS.contains(&amr.label(n)) {
                return true;
            }
            cur = amr.tree_parent(n);
        }
        false
    }
}

/// Legal `(span, type)` pairs for a non-primary reentrant edge.
pub fn legal_candidates_reentrancy(
    scorer: &Scorer<'_>,
    state: &AlignmentState,
    e: EdgeId,
) -> Vec<(usize, ReentrancyType)> {
    let ctx = Ctx { scorer, state };
    let amr = &scorer.inst.amr;
    let edge = amr.edge(e);
    let (q, r) = (edge.parent, edge.child);
    let q_primary = state.primary_edge(r).map_or(q, |p| amr.edge(p).parent);
    let mut out = Vec::new();
    for span in 0..state.span_count() {
        if ctx.coref(span, r) {
            out.push((span, ReentrancyType::Coref));
        }
        if ctx.repetition(span, r) {
            out.push((span, ReentrancyType::Repetition));
        }
        if ctx.coordination(span, q, q_primary) {
            out.push((span, ReentrancyType::Coordination));
        }
        if ctx.control(span, q, r) {
            out.push((span, ReentrancyType::Control));
        }
        if ctx.comparative(span, q) {
            out.push((span, ReentrancyType::ComparativeControl));
        }
    }
    for s in ctx.adjunct_marker(q, r) {
        out.push((s, ReentrancyType::AdjunctControl));
    }
    if let Some(s) = ctx.unmarked_adjunct(q, r) {
        out.push((s, ReentrancyType::UnmarkedAdjunctControl));
    }
    if out.is_empty() {
        let span = state.node_span(q).or(state.node_span(r)).unwrap_or(0);
        out.push((span, ReentrancyType::Pragmatic));
    }
    out.sort();
    out.dedup();
    out
}

/// Anchors primary edges and assigns each other reentrant edge its best
/// scoring `(span, type)`. Each edge is scored independently.
pub fn align_reentrancies(scorer: &Scorer<'_>, state: &mut AlignmentState) -> Vec<ReentrancyStep> {
    let amr = &scorer.inst.amr;
    let mut steps = Vec::new();
    for (node, incoming) in amr.reentrant_nodes() {
        let primary = state.primary_edge(node);
        for e in incoming {
            if state.reentrancy(e).is_some() {
                continue;
            }
            if Some(e) == primary {
                if let Some(span) = state.edge_alignment_span(amr, e) {
                    state.set_reentrancy(e, span, ReentrancyType::Primary);
                }
                continue;
            }
            let mut best: Option<ReentrancyStep> = None;
            for (span, kind) in legal_candidates_reentrancy(scorer, state, e) {
                let score = scorer.score_reentrancy(state, e, span, kind);
                if best.is_none_or(|b| score > b.score) {
                    best = Some(ReentrancyStep {
                        edge: e,
                        span,
                        kind,
                        score,
                    });
                }
            }
            let step = best.expect("pragmatic fallback guarantees a candidate");
            state.set_reentrancy(step.edge, step.span, step.kind);
            steps.push(step);
        }
    }
    steps
}
