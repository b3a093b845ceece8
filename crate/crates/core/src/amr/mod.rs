//! AMR graphs: representation, PENMAN I/O and structural queries.

mod canonical;
mod corpus;
mod graph;
mod penman;

pub use canonical::{canonical_form, is_isomorphic, CanonicalForm};
pub use corpus::{parse_corpus, read_corpus, write_corpus};
pub use graph::{concept_stem, AmrGraph, Edge, EdgeId, Node, NodeId, NodeKind, Role, SubgraphRef};
pub use penman::{parse_penman, serialize_penman, serialize_with_metadata};
