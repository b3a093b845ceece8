//! Mutable alignment state shared by the rules, the decoder and the trainer.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::alignment::{AlignmentSet, EdgeTriple, ReentrancyEntry, ReentrancyType, RelationEntry, SubgraphEntry};
use crate::amr::{AmrGraph, EdgeId, NodeId};
use crate::corpus::Instance;

/// Where an alignment came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Rule(&'static str),
    Statistical,
}

impl Provenance {
    pub fn is_rule(self) -> bool {
        matches!(self, Provenance::Rule(_))
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Rule(name) => write!(f, "rule:{name}"),
            Provenance::Statistical => f.write_str("statistical"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignedSubgraph {
    pub nodes: BTreeSet<NodeId>,
    pub provenance: Provenance,
    /// Closed subgraphs (entity units) are never extended.
    pub closed: bool,
}

/// Records a single node insertion so it can be reverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub node: NodeId,
    pub span: usize,
    pub index: usize,
    pub created: bool,
}

/// Alignments for one sentence, indexed by span, node and edge.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentState {
    subgraphs: Vec<Vec<AlignedSubgraph>>,
    node_loc: Vec<Option<(usize, usize)>>,
    relations: Vec<BTreeSet<EdgeId>>,
    edge_span: Vec<Option<usize>>,
    edge_provenance: Vec<Option<Provenance>>,
    primary: BTreeMap<NodeId, EdgeId>,
    reentrancies: BTreeMap<EdgeId, (usize, ReentrancyType)>,
}

impl AlignmentState {
    pub fn new(spans: usize, nodes: usize, edges: usize) -> Self {
        AlignmentState {
            subgraphs: vec![Vec::new(); spans],
            node_loc: vec![None; nodes],
            relations: vec![BTreeSet::new(); spans],
            edge_span: vec![None; edges],
            edge_provenance: vec![None; edges],
            primary: BTreeMap::new(),
            reentrancies: BTreeMap::new(),
        }
    }

    pub fn for_instance(inst: &Instance) -> Self {
        Self::new(inst.span_count(), inst.amr.node_count(), inst.amr.edge_count())
    }

    pub fn span_count(&self) -> usize {
        self.subgraphs.len()
    }

    // ----- subgraph layer -----

    pub fn subgraphs_at(&self, span: usize) -> &[AlignedSubgraph] {
        &self.subgraphs[span]
    }

    pub fn span_is_aligned(&self, span: usize) -> bool {
        !self.subgraphs[span].is_empty()
    }

    pub fn node_span(&self, node: NodeId) -> Option<usize> {
        self.node_loc[node.index()].map(|(s, _)| s)
    }

    pub fn node_location(&self, node: NodeId) -> Option<(usize, usize)> {
        self.node_loc[node.index()]
    }

    pub fn is_aligned(&self, node: NodeId) -> bool {
        self.node_loc[node.index()].is_some()
    }

    pub fn unaligned_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_loc
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_none())
            .map(|(i, _)| NodeId(i as u32))
    }

    pub fn all_nodes_aligned(&self) -> bool {
        self.node_loc.iter().all(Option::is_some)
    }

    /// Aligns an unaligned node set to a span as a new subgraph.
    pub fn add_subgraph(
        &mut self,
        span: usize,
        nodes: BTreeSet<NodeId>,
        provenance: Provenance,
        closed: bool,
    ) -> usize {
        let index = self.subgraphs[span].len();
        for &n in &nodes {
            assert!(self.node_loc[n.index()].is_none(), "node aligned twice");
            self.node_loc[n.index()] = Some((span, index));
        }
        self.subgraphs[span].push(AlignedSubgraph {
            nodes,
            provenance,
            closed,
        });
        index
    }

    /// Adds one node, either to subgraph `index` of `span` or, when `index`
    /// is `None`, as a new subgraph.
    pub fn insert_node(
        &mut self,
        node: NodeId,
        span: usize,
        index: Option<usize>,
        provenance: Provenance,
    ) -> Insertion {
        assert!(self.node_loc[node.index()].is_none(), "node aligned twice");
        match index {
            Some(i) => {
                self.subgraphs[span][i].nodes.insert(node);
                self.node_loc[node.index()] = Some((span, i));
                Insertion {
                    node,
                    span,
                    index: i,
                    created: false,
                }
            }
            None => {
                let i = self.add_subgraph(span, BTreeSet::from([node]), provenance, false);
                Insertion {
                    node,
                    span,
                    index: i,
                    created: true,
                }
            }
        }
    }

    pub fn revert(&mut self, ins: Insertion) {
        self.node_loc[ins.node.index()] = None;
        if ins.created {
            let removed = self.subgraphs[ins.span].pop().expect("subgraph to revert");
            debug_assert_eq!(removed.nodes.len(), 1);
        } else {
            self.subgraphs[ins.span][ins.index].nodes.remove(&ins.node);
        }
    }

    /// Extends a subgraph with more nodes (used by graph expansion rules).
    pub fn extend_subgraph(&mut self, span: usize, index: usize, nodes: &BTreeSet<NodeId>) {
        for &n in nodes {
            if self.node_loc[n.index()].is_none() {
                self.node_loc[n.index()] = Some((span, index));
                self.subgraphs[span][index].nodes.insert(n);
            }
        }
    }

    /// Span whose subgraph contains both ends of the edge.
    pub fn internal_span(&self, amr: &AmrGraph, e: EdgeId) -> Option<usize> {
        let edge = amr.edge(e);
        let a = self.node_loc[edge.parent.index()]?;
        let b = self.node_loc[edge.child.index()]?;
        (a == b).then_some(a.0)
    }

    pub fn is_internal(&self, amr: &AmrGraph, e: EdgeId) -> bool {
        self.internal_span(amr, e).is_some()
    }

    // ----- relation layer -----

    pub fn relations_at(&self, span: usize) -> &BTreeSet<EdgeId> {
        &self.relations[span]
    }

    pub fn relation_span(&self, e: EdgeId) -> Option<usize> {
        self.edge_span[e.index()]
    }

    pub fn relation_provenance(&self, e: EdgeId) -> Option<Provenance> {
        self.edge_provenance[e.index()]
    }

    pub fn add_relation(&mut self, span: usize, e: EdgeId, provenance: Provenance) {
        assert!(self.edge_span[e.index()].is_none(), "edge aligned twice");
        self.edge_span[e.index()] = Some(span);
        self.edge_provenance[e.index()] = Some(provenance);
        self.relations[span].insert(e);
    }

    pub fn remove_relation(&mut self, e: EdgeId) {
        if let Some(span) = self.edge_span[e.index()].take() {
            self.relations[span].remove(&e);
            self.edge_provenance[e.index()] = None;
        }
    }

    /// The span an edge belongs to in either the subgraph or relation layer.
    pub fn edge_alignment_span(&self, amr: &AmrGraph, e: EdgeId) -> Option<usize> {
        self.internal_span(amr, e).or(self.edge_span[e.index()])
    }

    // ----- reentrancy layer -----

    pub fn set_primary(&mut self, node: NodeId, e: EdgeId) {
        self.primary.insert(node, e);
    }

    pub fn primary_edge(&self, node: NodeId) -> Option<EdgeId> {
        self.primary.get(&node).copied()
    }

    pub fn primary_edges(&self) -> &BTreeMap<NodeId, EdgeId> {
        &self.primary
    }

    pub fn set_reentrancy(&mut self, e: EdgeId, span: usize, kind: ReentrancyType) {
        self.reentrancies.insert(e, (span, kind));
    }

    pub fn reentrancy(&self, e: EdgeId) -> Option<(usize, ReentrancyType)> {
        self.reentrancies.get(&e).copied()
    }

    pub fn reentrancies(&self) -> &BTreeMap<EdgeId, (usize, ReentrancyType)> {
        &self.reentrancies
    }

    // ----- export -----

    /// Converts to the file format. Within a span the subgraph holding the
    /// earliest node in depth-first order goes to the subgraph layer and the
    /// rest become duplicates.
    pub fn to_alignment_set(&self, inst: &Instance) -> AlignmentSet {
        let amr = &inst.amr;
        let mut set = AlignmentSet::empty(inst.id(), inst.spans.clone());
        for (span, subs) in self.subgraphs.iter().enumerate() {
            let mut order: Vec<usize> = (0..subs.len()).filter(|&i| !subs[i].nodes.is_empty()).collect();
            order.sort_by_key(|&i| subs[i].nodes.iter().next().copied());
            for (rank, &i) in order.iter().enumerate() {
                let sub = &subs[i];
                let entry = SubgraphEntry {
                    span,
                    nodes: sub.nodes.iter().map(|&n| amr.node(n).name.clone()).collect(),
                    edges: amr
                        .internal_edges(&sub.nodes)
                        .into_iter()
                        .map(|e| edge_triple(amr, e))
                        .collect(),
                    provenance: Some(sub.provenance.to_string()),
                };
                if rank == 0 {
                    set.subgraphs.push(entry);
                } else {
                    set.duplicates.push(entry);
                }
            }
        }
        for (span, edges) in self.relations.iter().enumerate() {
            if edges.is_empty() {
                continue;
            }
            set.relations.push(RelationEntry {
                span,
                edges: edges.iter().map(|&e| edge_triple(amr, e)).collect(),
                provenance: Some(
                    edges
                        .iter()
                        .map(|&e| {
                            self.edge_provenance[e.index()]
                                .unwrap_or(Provenance::Statistical)
                                .to_string()
                        })
                        .collect(),
                ),
            });
        }
        let mut reent: Vec<ReentrancyEntry> = self
            .reentrancies
            .iter()
            .map(|(&e, &(span, kind))| ReentrancyEntry {
                span,
                edge: edge_triple(amr, e),
                kind,
            })
            .collect();
        reent.sort_by_key(|r| r.span);
        set.reentrancies = reent;
        set
    }
}

pub fn edge_triple(amr: &AmrGraph, e: EdgeId) -> EdgeTriple {
    let edge = amr.edge(e);
    EdgeTriple(
        amr.node(edge.parent).name.clone(),
        edge.role.to_string(),
        amr.node(edge.child).name.clone(),
    )
}
