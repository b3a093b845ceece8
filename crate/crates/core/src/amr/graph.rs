use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

/// Index of a node inside its [`AmrGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of an edge inside its [`AmrGraph`]. Edge ids follow the order in
/// which the roles appear in the PENMAN source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Variable {
        concept: String,
    },
    /// Attribute values: strings, numbers, `-`, `imperative`, ...
    Constant {
        literal: String,
        quoted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    /// Variable name, or a synthetic `parent.k` id for constants.
    pub name: String,
    pub kind: NodeKind,
}

impl Node {
    /// Concept for variables, unquoted literal for constants.
    pub fn label(&self) -> &str {
        match &self.kind {
            NodeKind::Variable { concept } => concept,
            NodeKind::Constant { literal, .. } => literal,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, NodeKind::Constant { .. })
    }
}

/// Roles ending in `-of` that are not inverses.
const ATOMIC_OF_ROLES: &[&str] = &[":consist-of"];

/// A relation label such as `:ARG0` or `:time`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Role(String);

impl Role {
    pub fn new(label: impl Into<String>) -> Self {
        Role(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_inverse(&self) -> bool {
        let s = self.0.as_str();
        s.ends_with("-of") && !ATOMIC_OF_ROLES.contains(&s) && !s.starts_with(":prep-") && !s.starts_with(":conj-")
    }

    /// `:X-of` becomes `:X`; other roles are returned unchanged.
    pub fn base(&self) -> &str {
        if self.is_inverse() {
            &self.0[..self.0.len() - 3]
        } else {
            &self.0
        }
    }

    /// `:ARG0`, `:ARG1`, ... (not the inverse forms).
    pub fn is_core(&self) -> bool {
        is_numbered(&self.0, ":ARG")
    }

    pub fn is_core_inverse(&self) -> bool {
        self.is_inverse() && is_numbered(self.base(), ":ARG")
    }

    pub fn is_op(&self) -> bool {
        is_numbered(&self.0, ":op")
    }

    pub fn is_snt(&self) -> bool {
        is_numbered(&self.0, ":snt")
    }
}

fn is_numbered(s: &str, prefix: &str) -> bool {
    s.strip_prefix(prefix)
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A directed edge in surface orientation, exactly as written in PENMAN.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub parent: NodeId,
    pub role: Role,
    pub child: NodeId,
}

impl Edge {
    /// Forward-oriented view: `(a :X-of b)` is returned as `(b, :X, a)`.
    pub fn normalized(&self) -> (NodeId, &str, NodeId) {
        if self.role.is_inverse() {
            (self.child, self.role.base(), self.parent)
        } else {
            (self.parent, self.role.as_str(), self.child)
        }
    }
}

/// A set of nodes together with the edges running between them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgraphRef {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<EdgeId>,
}

/// A rooted AMR graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct AmrGraph {
    id: String,
    metadata: Vec<(String, String)>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    root: NodeId,
    by_name: HashMap<String, NodeId>,
    outgoing: Vec<Vec<EdgeId>>,
    incoming: Vec<Vec<EdgeId>>,
    tree_edge: Vec<Option<EdgeId>>,
}

impl AmrGraph {
    /// Assembles a graph. Nodes are expected in depth-first (first mention)
    /// order and edges in source order.
    pub fn from_parts(
        id: impl Into<String>,
        metadata: Vec<(String, String)>,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        root: NodeId,
    ) -> Self {
        let n = nodes.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            outgoing[e.parent.index()].push(EdgeId(i as u32));
            incoming[e.child.index()].push(EdgeId(i as u32));
        }
        let by_name = nodes
            .iter()
            .enumerate()
            .map(|(i, node)| (node.name.clone(), NodeId(i as u32)))
            .collect();
        let mut graph = AmrGraph {
            id: id.into(),
            metadata,
            nodes,
            edges,
            root,
            by_name,
            outgoing,
            incoming,
            tree_edge: vec![None; n],
        };
        graph.tree_edge = graph.compute_tree_edges();
        graph
    }

    fn compute_tree_edges(&self) -> Vec<Option<EdgeId>> {
        let mut tree = vec![None; self.nodes.len()];
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        seen[self.root.index()] = true;
        // Iterative preorder walk over outgoing edges in source order.
        let mut cursor = vec![0usize; self.nodes.len()];
        while let Some(&node) = stack.last() {
            let out = &self.outgoing[node.index()];
            if cursor[node.index()] < out.len() {
                let e = out[cursor[node.index()]];
                cursor[node.index()] += 1;
                let child = self.edges[e.index()].child;
                if !seen[child.index()] {
                    seen[child.index()] = true;
                    tree[child.index()] = Some(e);
                    stack.push(child);
                }
            } else {
                stack.pop();
            }
        }
        tree
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.index()]
    }

    /// Node ids in depth-first order.
    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn find(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        self.nodes[id.index()].label()
    }

    pub fn outgoing(&self, id: NodeId) -> &[EdgeId] {
        &self.outgoing[id.index()]
    }

    /// Surface incoming edges, i.e. every mention of the node as a role value.
    pub fn incoming(&self, id: NodeId) -> &[EdgeId] {
        &self.incoming[id.index()]
    }

    /// The edge at which the node is first reached in a depth-first walk.
    pub fn tree_edge(&self, id: NodeId) -> Option<EdgeId> {
        self.tree_edge[id.index()]
    }

    pub fn tree_parent(&self, id: NodeId) -> Option<NodeId> {
        self.tree_edge(id).map(|e| self.edge(e).parent)
    }

    pub fn tree_children(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.outgoing(id)
            .iter()
            .filter(move |&&e| self.tree_edge[self.edge(e).child.index()] == Some(e))
            .map(move |&e| self.edge(e).child)
    }

    /// Strict descendants along depth-first tree edges.
    pub fn tree_descendants(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack: Vec<NodeId> = self.tree_children(id).collect();
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.tree_children(n));
        }
        out
    }

    /// Is `ancestor` on the tree path from the root to `node` (exclusive of `node`)?
    pub fn is_tree_ancestor(&self, ancestor: NodeId, node: NodeId) -> bool {
        let mut cur = self.tree_parent(node);
        while let Some(p) = cur {
            if p == ancestor {
                return true;
            }
            cur = self.tree_parent(p);
        }
        false
    }

    /// A node with no outgoing edges.
    pub fn is_terminal(&self, id: NodeId) -> bool {
        self.outgoing[id.index()].is_empty()
    }

    pub fn adjacent(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.outgoing[id.index()]
            .iter()
            .map(move |&e| self.edges[e.index()].child)
            .chain(
                self.incoming[id.index()]
                    .iter()
                    .map(move |&e| self.edges[e.index()].parent),
            )
    }

    /// Nodes one edge away from `set` (either direction) that are not in it.
    pub fn neighbors(&self, set: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
        set.iter()
            .flat_map(|&n| self.adjacent(n))
            .filter(|n| !set.contains(n))
            .collect()
    }

    /// Nodes with two or more (surface) incoming edges, with those edges.
    pub fn reentrant_nodes(&self) -> Vec<(NodeId, Vec<EdgeId>)> {
        self.node_ids()
            .filter(|&n| self.incoming(n).len() >= 2)
            .map(|n| (n, self.incoming(n).to_vec()))
            .collect()
    }

    /// Connected as an undirected graph, or a set of terminal nodes sharing a
    /// parent.
    pub fn is_legal_subgraph(&self, nodes: &BTreeSet<NodeId>) -> bool {
        let Some(&start) = nodes.iter().next() else {
            return false;
        };
        if self.is_connected(nodes, start) {
            return true;
        }
        if !nodes.iter().all(|&n| self.is_terminal(n)) {
            return false;
        }
        let shared = nodes.iter().map(|&n| {
            self.incoming(n)
                .iter()
                .map(|&e| self.edge(e).parent)
                .collect::<BTreeSet<_>>()
        });
        shared
            .reduce(|a, b| a.intersection(&b).copied().collect())
            .is_some_and(|parents| !parents.is_empty())
    }

    fn is_connected(&self, nodes: &BTreeSet<NodeId>, start: NodeId) -> bool {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for m in self.adjacent(n) {
                if nodes.contains(&m) && seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        seen.len() == nodes.len()
    }

    /// Edges with both endpoints inside `nodes`.
    pub fn internal_edges(&self, nodes: &BTreeSet<NodeId>) -> BTreeSet<EdgeId> {
        self.edge_ids()
            .filter(|&e| {
                let edge = self.edge(e);
                nodes.contains(&edge.parent) && nodes.contains(&edge.child)
            })
            .collect()
    }

    pub fn subgraph(&self, nodes: BTreeSet<NodeId>) -> SubgraphRef {
        let edges = self.internal_edges(&nodes);
        SubgraphRef { nodes, edges }
    }

    /// Named entity strings: the `:opN` constants of a `name` node, in order.
    pub fn name_tokens(&self, name_node: NodeId) -> Option<Vec<&str>> {
        if self.label(name_node) != "name" {
            return None;
        }
        let mut ops: Vec<(u32, &str)> = self
            .outgoing(name_node)
            .iter()
            .map(|&e| self.edge(e))
            .filter(|e| e.role.is_op() && self.node(e.child).is_constant())
            .filter_map(|e| {
                let k = e.role.as_str()[3..].parse().ok()?;
                Some((k, self.label(e.child)))
            })
            .collect();
        if ops.is_empty() {
            return None;
        }
        ops.sort_by_key(|&(k, _)| k);
        Some(ops.into_iter().map(|(_, s)| s).collect())
    }

    /// First child reached through `role`, if any.
    pub fn child_by_role(&self, id: NodeId, role: &str) -> Option<NodeId> {
        self.outgoing(id)
            .iter()
            .map(|&e| self.edge(e))
            .find(|e| e.role.as_str() == role)
            .map(|e| e.child)
    }

    pub fn find_edge(&self, parent: NodeId, role: &str, child: NodeId) -> Option<EdgeId> {
        self.outgoing(parent)
            .iter()
            .copied()
            .find(|&e| self.edge(e).role.as_str() == role && self.edge(e).child == child)
    }

    /// Renders an edge as `p :role c` using node names.
    pub fn edge_string(&self, e: EdgeId) -> String {
        let edge = self.edge(e);
        format!(
            "{} {} {}",
            self.node(edge.parent).name,
            edge.role,
            self.node(edge.child).name
        )
    }
}

/// Strips a PropBank-style sense suffix: `want-01` becomes `want`.
pub fn concept_stem(concept: &str) -> &str {
    match concept.rsplit_once('-') {
        Some((stem, sense)) if !stem.is_empty() && !sense.is_empty() && sense.bytes().all(|b| b.is_ascii_digit()) => {
            stem
        }
        _ => concept,
    }
}
