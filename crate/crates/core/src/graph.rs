//! Simple graphs, multigraphs with virtual edges, parsing, and block structure.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// Simple undirected graph on dense vertex ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
    names: Option<Vec<String>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0, names: None }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop on {u}")));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
        }
        for list in &mut g.adj {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::InvalidInput("duplicate edge".into()));
            }
        }
        g.m = edges.len();
        Ok(g)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.n());
        self.names = Some(names);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbour list.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| u < v).map(|&v| (u, v)));
        }
        out
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// External name of `v`, falling back to its id.
    pub fn name(&self, v: usize) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || connected_components(self).len() == 1
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), &edges).expect("induced subgraph of a simple graph")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n(), &edges).expect("permutation of a simple graph")
    }

    /// Disjoint union, vertices of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut edges = self.edges();
        edges.extend(other.edges().into_iter().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.n(), &edges).expect("disjoint union")
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let mut covered = vec![false; self.n()];
        for (u, v) in self.edges() {
            covered[u] = true;
            covered[v] = true;
            out.push_str(&format!("{} {}\n", self.name(u), self.name(v)));
        }
        for (v, seen) in covered.iter().enumerate() {
            if !seen {
                out.push_str(&format!("{}\n", self.name(v)));
            }
        }
        out
    }

    pub fn to_graph6(&self) -> String {
        let n = self.n();
        let mut bytes = Vec::new();
        if n <= 62 {
            bytes.push(n as u8 + 63);
        } else if n <= 258_047 {
            bytes.push(126);
            for shift in [12, 6, 0] {
                bytes.push(((n >> shift) & 63) as u8 + 63);
            }
        } else {
            bytes.extend([126, 126]);
            for shift in [30, 24, 18, 12, 6, 0] {
                bytes.push(((n >> shift) & 63) as u8 + 63);
            }
        }
        let mut acc = 0u8;
        let mut nbits = 0;
        for j in 1..n {
            for i in 0..j {
                acc = (acc << 1) | self.has_edge(i, j) as u8;
                nbits += 1;
                if nbits == 6 {
                    bytes.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            bytes.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(bytes).expect("graph6 is ascii")
    }
}

/// Supported text formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    EdgeList,
    Graph6,
}

/// Parses `text` in the given format.
///
/// Edge lists take one edge per line as two whitespace-separated names; `#` lines and
/// blank lines are skipped and a line with a single name declares an isolated vertex.
/// Names are mapped to ids in first-seen order.
pub fn parse_graph(text: &str, format: Format) -> std::result::Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => parse_graph6(text),
    }
}

fn parse_edge_list(text: &str) -> std::result::Result<Graph, ParseError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut id_of = |tok: &str| -> usize {
        *ids.entry(tok.to_string()).or_insert_with(|| {
            names.push(tok.to_string());
            names.len() - 1
        })
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks.as_slice() {
            [a] => {
                id_of(a);
            }
            [a, b] => {
                if a == b {
                    return Err(ParseError::SelfLoop { line, name: a.to_string() });
                }
                let (ia, ib) = (id_of(a), id_of(b));
                let key = (ia.min(ib), ia.max(ib));
                if !seen.insert(key) {
                    return Err(ParseError::DuplicateEdge { line, u: a.to_string(), v: b.to_string() });
                }
                edges.push(key);
            }
            _ => return Err(ParseError::MalformedLine { line, found: toks.len() }),
        }
    }
    let g = Graph::from_edges(names.len(), &edges).expect("validated edge list");
    Ok(g.with_names(names))
}

fn parse_graph6(text: &str) -> std::result::Result<Graph, ParseError> {
    let trimmed = text.trim();
    let (body, base) = match trimmed.strip_prefix(">>graph6<<") {
        Some(rest) => (rest, 10),
        None => (trimmed, 0),
    };
    let bytes = body.as_bytes();
    let err = |offset: usize, reason| ParseError::Graph6 { offset: base + offset, reason };
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, "byte outside the graph6 range 63..=126"));
        }
    }
    let val = |i: usize| (bytes[i] - 63) as usize;
    if bytes.is_empty() {
        return Err(err(0, "empty input"));
    }
    let (n, mut pos) = if bytes[0] != 126 {
        (val(0), 1)
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(err(bytes.len(), "truncated vertex count"));
        }
        ((val(1) << 12) | (val(2) << 6) | val(3), 4)
    } else {
        if bytes.len() < 8 {
            return Err(err(bytes.len(), "truncated vertex count"));
        }
        let mut n = 0;
        for i in 2..8 {
            n = (n << 6) | val(i);
        }
        (n, 8)
    };
    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() - pos != need {
        return Err(err(pos, "adjacency length does not match the vertex count"));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let chunk = val(pos + bit / 6);
            if (chunk >> (5 - bit % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    pos += need;
    debug_assert_eq!(pos, bytes.len());
    Ok(Graph::from_edges(n, &edges).expect("graph6 adjacency is simple"))
}

/// A connected component together with the map from its ids back to the parent graph.
#[derive(Clone, Debug)]
pub struct Component {
    pub graph: Graph,
    pub vertex_map: Vec<usize>,
}

/// Connected components ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Component> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut head = 0;
        while head < members.len() {
            let v = members[head];
            head += 1;
            for &w in g.neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(Component { graph: g.induced(&members), vertex_map: members });
    }
    out
}

/// Tag on a multigraph edge: real, or the virtual edge created by split `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeTag {
    Real,
    Virtual(usize),
}

impl EdgeTag {
    pub fn is_virtual(self) -> bool {
        matches!(self, EdgeTag::Virtual(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiEdge {
    pub u: usize,
    pub v: usize,
    pub tag: EdgeTag,
}

impl MultiEdge {
    pub fn new(u: usize, v: usize, tag: EdgeTag) -> Self {
        MultiEdge { u, v, tag }
    }

    pub fn real(u: usize, v: usize) -> Self {
        MultiEdge::new(u, v, EdgeTag::Real)
    }

    /// Endpoints as `(min, max)`.
    pub fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Multigraph whose vertices carry ids of an ambient graph (not necessarily dense).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    vertices: Vec<usize>,
    edges: Vec<MultiEdge>,
}

impl MultiGraph {
    /// `vertices` need not be sorted; every edge endpoint must be listed.
    pub fn new(mut vertices: Vec<usize>, edges: Vec<MultiEdge>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        debug_assert!(edges
            .iter()
            .all(|e| e.u != e.v && vertices.binary_search(&e.u).is_ok() && vertices.binary_search(&e.v).is_ok()));
        MultiGraph { vertices, edges }
    }

    /// Multigraph spanned by a list of edges.
    pub fn from_edges(edges: Vec<MultiEdge>) -> Self {
        let vertices = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        MultiGraph::new(vertices, edges)
    }

    pub fn from_graph(g: &Graph) -> Self {
        let edges = g.edges().into_iter().map(|(u, v)| MultiEdge::real(u, v)).collect();
        MultiGraph::new((0..g.n()).collect(), edges)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Sorted vertex ids.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    /// Position of vertex `v` in [`vertices`](Self::vertices).
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.index_of(v).is_some()
    }

    pub fn virtual_tags(&self) -> Vec<usize> {
        let mut tags: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| match e.tag {
                EdgeTag::Virtual(t) => Some(t),
                EdgeTag::Real => None,
            })
            .collect();
        tags.sort_unstable();
        tags
    }

    /// Local adjacency: for each local vertex, `(local neighbour, edge index)`.
    pub fn local_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for (i, e) in self.edges.iter().enumerate() {
            let a = self.index_of(e.u).expect("endpoint");
            let b = self.index_of(e.v).expect("endpoint");
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        let adj = self.local_adjacency();
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }

    /// Connected with at least two vertices and no cut vertex.
    pub fn is_biconnected(&self) -> bool {
        if self.n() < 2 || !self.is_connected() {
            return false;
        }
        let adj: Vec<Vec<usize>> =
            self.local_adjacency().into_iter().map(|l| l.into_iter().map(|(w, _)| w).collect()).collect();
        articulation_points(&adj, None).is_empty()
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={:?} E=[", self.vertices)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match e.tag {
                EdgeTag::Real => write!(f, "{}-{}", e.u, e.v)?,
                EdgeTag::Virtual(t) => write!(f, "{}~{}#{}", e.u, e.v, t)?,
            }
        }
        write!(f, "]")
    }
}

/// Articulation points of the simple graph given by `adj`, ignoring vertex `skip`.
pub(crate) fn articulation_points(adj: &[Vec<usize>], skip: Option<usize>) -> Vec<usize> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_art = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX || Some(root) == skip {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, i) = *top;
            if i < adj[v].len() {
                top.2 += 1;
                let w = adj[v][i];
                if Some(w) == skip {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if parent != root && low[v] >= disc[parent] {
                        is_art[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_art[root] = true;
        }
    }
    (0..n).filter(|&v| is_art[v]).collect()
}

/// Node of the block-cut tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BcNode {
    Block(usize),
    Cut(usize),
}

/// Blocks, cut vertices and the block-cut tree of a connected graph.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<MultiGraph>,
    /// Sorted.
    pub cut_vertices: Vec<usize>,
    /// Blocks first (node `i` is block `i`), then cut vertices in sorted order.
    pub tree_nodes: Vec<BcNode>,
    pub tree_adj: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    /// Tree node index of cut vertex `a`.
    pub fn cut_node(&self, a: usize) -> Option<usize> {
        self.cut_vertices.binary_search(&a).ok().map(|i| self.blocks.len() + i)
    }
}

/// Blocks and cut vertices by the DFS lowpoint method.
pub fn blocks_and_cut_vertices(g: &Graph) -> Result<BlockDecomposition> {
    let n = g.n();
    if n == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut blocks: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    time += 1;
    while let Some(top) = stack.last_mut() {
        let (v, parent, i) = *top;
        if i < g.degree(v) {
            top.2 += 1;
            let w = g.neighbors(v)[i];
            if disc[w] == usize::MAX {
                disc[w] = time;
                low[w] = time;
                time += 1;
                edge_stack.push((v, w));
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    let mut block = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        block.push((e.0.min(e.1), e.0.max(e.1)));
                        if e == (parent, v) {
                            break;
                        }
                    }
                    block.sort_unstable();
                    blocks.push(block);
                }
            }
        }
    }
    blocks.sort();
    let mut count = vec![0usize; n];
    let blocks: Vec<MultiGraph> = blocks
        .into_iter()
        .map(|edges| {
            let mg = MultiGraph::from_edges(edges.into_iter().map(|(u, v)| MultiEdge::real(u, v)).collect());
            for &v in mg.vertices() {
                count[v] += 1;
            }
            mg
        })
        .collect();
    let cut_vertices: Vec<usize> = (0..n).filter(|&v| count[v] >= 2).collect();
    let nb = blocks.len();
    let mut tree_nodes: Vec<BcNode> = (0..nb).map(BcNode::Block).collect();
    tree_nodes.extend(cut_vertices.iter().map(|&a| BcNode::Cut(a)));
    let mut tree_adj = vec![Vec::new(); tree_nodes.len()];
    for (b, block) in blocks.iter().enumerate() {
        for &v in block.vertices() {
            if let Ok(ci) = cut_vertices.binary_search(&v) {
                tree_adj[b].push(nb + ci);
                tree_adj[nb + ci].push(b);
            }
        }
    }
    Ok(BlockDecomposition { blocks, cut_vertices, tree_nodes, tree_adj })
}
