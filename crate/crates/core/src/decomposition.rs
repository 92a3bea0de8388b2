//! Rooted tree decomposition over cut vertices (C-nodes), separating pairs (S-nodes) and
//! triconnected components (T-nodes).

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{blocks_and_cut_vertices, BcNode, EdgeTag, Graph, MultiEdge, MultiGraph};
use crate::triconnect::{triconnected_components_with, ComponentKind, TriComponent, TriconnectOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    C,
    S,
    T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodePayload {
    Cut(usize),
    /// Separating pair with `x < y`.
    Pair(usize, usize),
    Component(TriComponent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub id: usize,
    pub payload: NodePayload,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

impl DecompNode {
    pub fn kind(&self) -> NodeKind {
        match self.payload {
            NodePayload::Cut(_) => NodeKind::C,
            NodePayload::Pair(..) => NodeKind::S,
            NodePayload::Component(_) => NodeKind::T,
        }
    }

    /// Vertices of the structure at this node, sorted.
    pub fn bag(&self) -> Vec<usize> {
        match &self.payload {
            NodePayload::Cut(a) => vec![*a],
            NodePayload::Pair(x, y) => vec![*x, *y],
            NodePayload::Component(c) => c.graph.vertices().to_vec(),
        }
    }

    pub fn component(&self) -> Option<&TriComponent> {
        match &self.payload {
            NodePayload::Component(c) => Some(c),
            _ => None,
        }
    }
}

/// The decomposition tree of a connected graph. Virtual tags are unique across blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTree {
    pub nodes: Vec<DecompNode>,
    pub root: usize,
    pub n: usize,
}

/// Unique center of a tree given by adjacency lists.
pub fn tree_center(adj: &[Vec<usize>]) -> Result<usize> {
    let n = adj.len();
    if n == 0 {
        return Err(Error::invariant("center of an empty tree"));
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &w in &adj[v] {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() && remaining > 2 {
            return Err(Error::invariant("tree center search on a graph with a cycle"));
        }
        layer = next;
    }
    let left: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    match left.as_slice() {
        [c] => Ok(*c),
        _ => Err(Error::invariant(format!("tree has two centers {left:?}"))),
    }
}

/// Builds the decomposition tree with the default split order.
pub fn build_decomposition_tree(g: &Graph) -> Result<DecompTree> {
    build_decomposition_tree_with(g, TriconnectOptions::default())
}

pub fn build_decomposition_tree_with(g: &Graph, opts: TriconnectOptions) -> Result<DecompTree> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    if n == 1 {
        let node = DecompNode { id: 0, payload: NodePayload::Cut(0), parent: None, children: vec![], depth: 0 };
        return Ok(DecompTree { nodes: vec![node], root: 0, n });
    }
    let bd = blocks_and_cut_vertices(g)?;
    let mut payloads: Vec<NodePayload> = bd.cut_vertices.iter().map(|&a| NodePayload::Cut(a)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); payloads.len()];
    let mut cut_node: HashMap<usize, usize> = HashMap::new();
    for (i, &a) in bd.cut_vertices.iter().enumerate() {
        cut_node.insert(a, i);
    }
    let mut tag_offset = 0;
    let mut block_nodes: Vec<Vec<usize>> = Vec::with_capacity(bd.blocks.len());
    for block in &bd.blocks {
        let first = payloads.len();
        if block.m() == 1 {
            payloads.push(NodePayload::Component(TriComponent::new(ComponentKind::Edge, block.clone())));
            adj.push(Vec::new());
        } else {
            let tc = triconnected_components_with(block, opts)?;
            let mut pair_nodes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut max_tag = 0;
            for comp in tc.components {
                let edges: Vec<MultiEdge> = comp
                    .graph
                    .edges()
                    .iter()
                    .map(|e| match e.tag {
                        EdgeTag::Virtual(t) => {
                            max_tag = max_tag.max(t + 1);
                            MultiEdge::new(e.u, e.v, EdgeTag::Virtual(t + tag_offset))
                        }
                        EdgeTag::Real => *e,
                    })
                    .collect();
                let comp = TriComponent::new(comp.kind, MultiGraph::from_edges(edges));
                let t_id = payloads.len();
                let mut pairs: Vec<(usize, usize)> =
                    comp.graph.edges().iter().filter(|e| e.tag.is_virtual()).map(MultiEdge::key).collect();
                pairs.sort_unstable();
                pairs.dedup();
                payloads.push(NodePayload::Component(comp));
                adj.push(Vec::new());
                for p in pairs {
                    let s_id = *pair_nodes.entry(p).or_insert_with(|| {
                        payloads.push(NodePayload::Pair(p.0, p.1));
                        adj.push(Vec::new());
                        payloads.len() - 1
                    });
                    adj[t_id].push(s_id);
                    adj[s_id].push(t_id);
                }
            }
            tag_offset += max_tag;
        }
        block_nodes.push((first..payloads.len()).collect());
    }
    let contains = |p: &NodePayload, a: usize| match p {
        NodePayload::Cut(c) => *c == a,
        NodePayload::Pair(x, y) => *x == a || *y == a,
        NodePayload::Component(c) => c.graph.contains(a),
    };
    let local_center = |nodes: &[usize], adj: &[Vec<usize>]| -> Result<usize> {
        let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let local: Vec<Vec<usize>> =
            nodes.iter().map(|v| adj[*v].iter().filter_map(|w| index.get(w).copied()).collect()).collect();
        Ok(nodes[tree_center(&local)?])
    };
    for (b, block) in bd.blocks.iter().enumerate() {
        for &a in block.vertices() {
            if let Some(&c) = cut_node.get(&a) {
                let holding: Vec<usize> =
                    block_nodes[b].iter().copied().filter(|&v| contains(&payloads[v], a)).collect();
                let center = local_center(&holding, &adj)?;
                adj[c].push(center);
                adj[center].push(c);
            }
        }
    }
    let bc_center = tree_center(&bd.tree_adj)?;
    let root = match bd.tree_nodes[bc_center] {
        BcNode::Cut(a) => cut_node[&a],
        BcNode::Block(b) => local_center(&block_nodes[b], &adj)?,
    };
    let edge_count: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if edge_count + 1 != payloads.len() {
        return Err(Error::invariant("decomposition is not a tree"));
    }
    orient(payloads, &adj, root, n)
}

fn sort_key(p: &NodePayload) -> (NodeKind, Vec<usize>, Vec<MultiEdge>) {
    match p {
        NodePayload::Cut(a) => (NodeKind::C, vec![*a], vec![]),
        NodePayload::Pair(x, y) => (NodeKind::S, vec![*x, *y], vec![]),
        NodePayload::Component(c) => (NodeKind::T, c.graph.vertices().to_vec(), c.graph.edges().to_vec()),
    }
}

/// Roots the tree at `root`, renumbering nodes in breadth-first order.
fn orient(payloads: Vec<NodePayload>, adj: &[Vec<usize>], root: usize, n: usize) -> Result<DecompTree> {
    let total = payloads.len();
    let mut new_id = vec![usize::MAX; total];
    let mut order = vec![root];
    let mut parent_old = vec![usize::MAX; total];
    new_id[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut kids: Vec<usize> = adj[v].iter().copied().filter(|&w| w != parent_old[v]).collect();
        kids.sort_by_cached_key(|&w| sort_key(&payloads[w]));
        for w in kids {
            if new_id[w] != usize::MAX {
                return Err(Error::invariant("decomposition contains a cycle"));
            }
            new_id[w] = order.len();
            parent_old[w] = v;
            order.push(w);
        }
    }
    if order.len() != total {
        return Err(Error::invariant("decomposition is disconnected"));
    }
    let mut slots: Vec<Option<NodePayload>> = payloads.into_iter().map(Some).collect();
    let mut nodes: Vec<DecompNode> = Vec::with_capacity(total);
    for (id, &old) in order.iter().enumerate() {
        let parent = (old != root).then(|| new_id[parent_old[old]]);
        let depth = parent.map_or(0, |p: usize| nodes[p].depth + 1);
        let mut children: Vec<usize> = adj[old].iter().filter(|&&w| w != parent_old[old]).map(|&w| new_id[w]).collect();
        children.sort_unstable();
        let payload = slots[old].take().expect("each node visited once");
        nodes.push(DecompNode { id, payload, parent, children, depth });
    }
    Ok(DecompTree { nodes, root: 0, n })
}

impl DecompTree {
    pub fn node(&self, id: usize) -> &DecompNode {
        &self.nodes[id]
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|v| v.depth).max().unwrap_or(0)
    }

    /// Node ids in the subtree of `v`, preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.nodes[u].children.iter().rev());
        }
        out
    }

    /// Node ids grouped by depth, deepest level first.
    pub fn levels_bottom_up(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); self.height() + 1];
        for v in &self.nodes {
            levels[v.depth].push(v.id);
        }
        levels.reverse();
        levels
    }

    /// The graph merged from the T-nodes below `v`. Matched virtual edges disappear;
    /// remaining virtual edges on the same pair are collapsed to one.
    pub fn subtree_graph(&self, v: usize) -> MultiGraph {
        let mut edges: Vec<MultiEdge> = Vec::new();
        let mut vertices: Vec<usize> = Vec::new();
        for u in self.subtree(v) {
            match &self.nodes[u].payload {
                NodePayload::Component(c) => {
                    edges.extend_from_slice(c.graph.edges());
                    vertices.extend_from_slice(c.graph.vertices());
                }
                NodePayload::Cut(a) => vertices.push(*a),
                NodePayload::Pair(..) => {}
            }
        }
        let mut tag_count: HashMap<usize, usize> = HashMap::new();
        for e in &edges {
            if let EdgeTag::Virtual(t) = e.tag {
                *tag_count.entry(t).or_default() += 1;
            }
        }
        let mut seen_virtual: HashMap<(usize, usize), ()> = HashMap::new();
        let mut kept = Vec::new();
        for e in edges {
            match e.tag {
                EdgeTag::Real => kept.push(e),
                EdgeTag::Virtual(t) if tag_count[&t] == 1 => {
                    if seen_virtual.insert(e.key(), ()).is_none() {
                        kept.push(e);
                    }
                }
                EdgeTag::Virtual(_) => {}
            }
        }
        kept.sort_unstable();
        MultiGraph::new(vertices, kept)
    }

    pub fn to_dump(&self) -> TreeDump {
        let nodes = self
            .nodes
            .iter()
            .map(|v| NodeDump {
                id: v.id,
                kind: v.kind(),
                payload: match &v.payload {
                    NodePayload::Cut(a) => PayloadDump::Cut { vertex: *a },
                    NodePayload::Pair(x, y) => PayloadDump::Pair { x: *x, y: *y },
                    NodePayload::Component(c) => PayloadDump::Component {
                        kind: c.kind,
                        vertices: c.graph.vertices().to_vec(),
                        edges: c
                            .graph
                            .edges()
                            .iter()
                            .map(|e| EdgeDump {
                                u: e.u,
                                v: e.v,
                                virtual_id: match e.tag {
                                    EdgeTag::Virtual(t) => Some(t),
                                    EdgeTag::Real => None,
                                },
                            })
                            .collect(),
                    },
                },
                children: v.children.clone(),
            })
            .collect();
        TreeDump { root: self.root, n: self.n, nodes }
    }

    /// Rebuilds a tree from its dump, checking parent/child consistency.
    pub fn from_dump(dump: &TreeDump) -> Result<DecompTree> {
        let total = dump.nodes.len();
        let mut parent = vec![None; total];
        for nd in &dump.nodes {
            if nd.id >= total {
                return Err(Error::InvalidInput(format!("node id {} out of range", nd.id)));
            }
            for &c in &nd.children {
                if c >= total || parent[c].is_some() || c == dump.root {
                    return Err(Error::InvalidInput(format!("bad child {c}")));
                }
                parent[c] = Some(nd.id);
            }
        }
        let mut nodes: Vec<Option<DecompNode>> = vec![None; total];
        for nd in &dump.nodes {
            let payload = match &nd.payload {
                PayloadDump::Cut { vertex } => NodePayload::Cut(*vertex),
                PayloadDump::Pair { x, y } => NodePayload::Pair(*x, *y),
                PayloadDump::Component { kind, vertices, edges } => {
                    let edges = edges
                        .iter()
                        .map(|e| MultiEdge::new(e.u, e.v, e.virtual_id.map_or(EdgeTag::Real, EdgeTag::Virtual)))
                        .collect();
                    NodePayload::Component(TriComponent::new(*kind, MultiGraph::new(vertices.clone(), edges)))
                }
            };
            nodes[nd.id] =
                Some(DecompNode { id: nd.id, payload, parent: parent[nd.id], children: nd.children.clone(), depth: 0 });
        }
        let mut nodes: Vec<DecompNode> = nodes
            .into_iter()
            .map(|n| n.ok_or_else(|| Error::InvalidInput("missing node".into())))
            .collect::<Result<_>>()?;
        let mut queue = VecDeque::from([dump.root]);
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            let d = nodes[v].depth;
            for c in nodes[v].children.clone() {
                nodes[c].depth = d + 1;
                queue.push_back(c);
            }
        }
        if seen != total {
            return Err(Error::InvalidInput("dump is not a rooted tree".into()));
        }
        Ok(DecompTree { nodes, root: dump.root, n: dump.n })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDump {
    pub root: usize,
    pub n: usize,
    pub nodes: Vec<NodeDump>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDump {
    pub id: usize,
    pub kind: NodeKind,
    pub payload: PayloadDump,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PayloadDump {
    Component { kind: ComponentKind, vertices: Vec<usize>, edges: Vec<EdgeDump> },
    Pair { x: usize, y: usize },
    Cut { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDump {
    pub u: usize,
    pub v: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub virtual_id: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn centers() {
        assert_eq!(tree_center(&[vec![]]).unwrap(), 0);
        assert_eq!(tree_center(&[vec![1], vec![0, 2], vec![1]]).unwrap(), 1);
        assert!(matches!(tree_center(&[vec![1], vec![0]]), Err(Error::Invariant(_))));
    }

    #[test]
    fn cycle_is_single_t_node() {
        let t = build_decomposition_tree(&graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].kind(), NodeKind::T);
        assert_eq!(t.nodes[0].component().unwrap().kind, ComponentKind::Polygon);
    }

    #[test]
    fn path_rooted_at_middle() {
        let t = build_decomposition_tree(&graph(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(t.nodes[0].payload, NodePayload::Cut(1));
        assert_eq!(t.nodes[0].children.len(), 2);
        for &c in &t.nodes[0].children {
            assert_eq!(t.nodes[c].component().unwrap().kind, ComponentKind::Edge);
        }
    }

    #[test]
    fn diamond_rooted_at_pair() {
        let g = graph(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]);
        let t = build_decomposition_tree(&g).unwrap();
        assert_eq!(t.nodes[0].payload, NodePayload::Pair(0, 1));
        let kinds: Vec<_> = t.nodes[0].children.iter().map(|&c| t.nodes[c].component().unwrap().kind).collect();
        assert_eq!(kinds, vec![ComponentKind::Bond, ComponentKind::Polygon, ComponentKind::Polygon]);
        assert_eq!(t.subtree_graph(0), MultiGraph::from_graph(&g));
        // a triangle child: its own graph, including the virtual edge (0,1)
        let tri = t.nodes[0].children[1];
        let sg = t.subtree_graph(tri);
        assert_eq!((sg.n(), sg.m()), (3, 3));
        assert!(sg.edges().iter().any(|e| e.key() == (0, 1) && e.tag.is_virtual()));
    }

    #[test]
    fn single_vertex() {
        let t = build_decomposition_tree(&Graph::new(1)).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.nodes[0].payload, NodePayload::Cut(0));
    }

    #[test]
    fn dump_round_trip() {
        let g = graph(6, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (3, 4), (4, 5)]);
        let t = build_decomposition_tree(&g).unwrap();
        assert_eq!(DecompTree::from_dump(&t.to_dump()).unwrap(), t);
    }
}
