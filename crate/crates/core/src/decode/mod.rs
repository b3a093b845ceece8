//! Greedy structure-preserving decoding for each alignment phase.

mod reentrancy;
mod relation;
mod subgraph;

pub use reentrancy::{align_reentrancies, legal_candidates_reentrancy, ReentrancyStep};
pub use relation::{align_relations, legal_candidates_relation, RelationStep};
pub use subgraph::{
    align_subgraphs, candidate_delta, legal_candidates_subgraph, Slot, SubgraphCandidate, SubgraphStep,
};

use crate::corpus::Instance;
use crate::model::{ModelParams, Scorer};
use crate::rules::{identify_primary_edges, prealign_relations, prealign_subgraphs};
use crate::state::AlignmentState;

/// Runs the rules and all three decoding phases for one sentence.
pub fn align_instance(inst: &Instance, params: &ModelParams) -> AlignmentState {
    let scorer = Scorer::new(inst, params);
    let mut state = prealign_subgraphs(inst);
    align_subgraphs(&scorer, &mut state);
    finish_relations(&scorer, &mut state);
    finish_reentrancies(&scorer, &mut state);
    state
}

/// Relation rules followed by relation decoding.
pub fn finish_relations(scorer: &Scorer<'_>, state: &mut AlignmentState) {
    prealign_relations(state, scorer.inst);
    align_relations(scorer, state);
}

/// Primary-edge identification followed by reentrancy decoding.
pub fn finish_reentrancies(scorer: &Scorer<'_>, state: &mut AlignmentState) {
    identify_primary_edges(state, scorer.inst);
    align_reentrancies(scorer, state);
}
