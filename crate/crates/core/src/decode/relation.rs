//! Greedy decoding of the relation layer.

use std::collections::BTreeSet;

use crate::amr::EdgeId;
use crate::model::Scorer;
use crate::rules::{conventional_side, Side};
use crate::state::{AlignmentState, Provenance};

/// Tags allowed on unaligned function-word spans.
const FUNCTION_POS: &[&str] = &["IN", "TO", "POS", "PRP$", "WRB"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationStep {
    pub edge: EdgeId,
    pub span: usize,
    pub delta: f64,
}

/// Candidate spans for an edge, ascending.
pub fn legal_candidates_relation(scorer: &Scorer<'_>, state: &AlignmentState, e: EdgeId) -> Vec<usize> {
    let inst = scorer.inst;
    let amr = &inst.amr;
    let edge = amr.edge(e);
    let parent_span = state.node_span(edge.parent);
    let child_span = state.node_span(edge.child);
    let mut out = BTreeSet::new();
    match conventional_side(&edge.role) {
        Some((Side::Parent, _)) => out.extend(parent_span),
        Some((Side::Child, _)) => out.extend(child_span),
        None => {
            out.extend(parent_span);
            out.extend(child_span);
            if let Some(p) = parent_span {
                let mut targets: Vec<usize> = child_span.into_iter().collect();
                if amr.tree_edge(edge.child) == Some(e) {
                    targets.extend(
                        amr.tree_descendants(edge.child)
                            .into_iter()
                            .filter_map(|n| state.node_span(n)),
                    );
                }
                for span in 0..state.span_count() {
                    if state.span_is_aligned(span) || !is_function_span(scorer, span) {
                        continue;
                    }
                    if targets
                        .iter()
                        .any(|&t| (p < span && span < t) || (t < span && span < p))
                    {
                        out.insert(span);
                    }
                }
            }
        }
    }
    if out.is_empty() {
        out.extend(parent_span.or(child_span));
    }
    if out.is_empty() {
        out.insert(0);
    }
    out.into_iter().collect()
}

fn is_function_span(scorer: &Scorer<'_>, span: usize) -> bool {
    let inst = scorer.inst;
    inst.sentence.pos[inst.spans[span].tokens()]
        .iter()
        .any(|p| FUNCTION_POS.contains(&p.as_str()))
}

/// Aligns every edge that is neither internal nor already aligned.
pub fn align_relations(scorer: &Scorer<'_>, state: &mut AlignmentState) -> Vec<RelationStep> {
    let amr = &scorer.inst.amr;
    let mut remaining: Vec<EdgeId> = amr
        .edge_ids()
        .filter(|&e| !state.is_internal(amr, e) && state.relation_span(e).is_none())
        .collect();
    let mut trace = Vec::new();
    while !remaining.is_empty() {
        let mut best: Option<(usize, RelationStep)> = None;
        for (i, &e) in remaining.iter().enumerate() {
            for span in legal_candidates_relation(scorer, state, e) {
                let current = state.relations_at(span);
                let before = scorer.score_relation_span(state, span, current);
                let mut grown = current.clone();
                grown.insert(e);
                let delta = scorer.score_relation_span(state, span, &grown) - before;
                if best.is_none_or(|(_, b)| delta > b.delta) {
                    best = Some((i, RelationStep { edge: e, span, delta }));
                }
            }
        }
        let (i, step) = best.expect("every edge has a candidate");
        state.add_relation(step.span, step.edge, Provenance::Statistical);
        remaining.remove(i);
        trace.push(step);
    }
    trace
}
