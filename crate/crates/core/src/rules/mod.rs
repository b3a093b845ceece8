//! Deterministic pre-alignment rules applied before statistical decoding.

mod english;
mod primary;
mod relation;
mod subgraph;

pub use english::parse_number_words;
pub use primary::identify_primary_edges;
pub use relation::{conventional_side, prealign_relations, Side};
pub use subgraph::{entity_unit, prealign_subgraphs};

use crate::alignment::ReentrancyType;
use crate::corpus::Instance;
use crate::state::AlignmentState;

/// All rule layers together, as emitted by the rules-only path. Primary
/// edges are included when their alignment span is known.
pub fn rules_only(inst: &Instance) -> AlignmentState {
    let mut state = prealign_subgraphs(inst);
    prealign_relations(&mut state, inst);
    identify_primary_edges(&mut state, inst);
    let primaries: Vec<_> = state.primary_edges().values().copied().collect();
    for e in primaries {
        if let Some(span) = state.edge_alignment_span(&inst.amr, e) {
            state.set_reentrancy(e, span, ReentrancyType::Primary);
        }
    }
    state
}
