//! Triconnected components of a biconnected multigraph by split-to-completion and merge.
//!
//! Each round finds a separating pair of the current piece, either a pair joined by parallel
//! edges or a pair `{x,y}` where `y` is an articulation point of the piece minus `x`, and splits
//! off every separation class at once. Pieces that are cycles or two-vertex bonds are final.
//! Afterwards bonds sharing a virtual edge are merged, and so are polygons.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{articulation_points, EdgeTag, MultiEdge, MultiGraph};
use crate::util::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    /// Two vertices joined by at least three edges.
    Bond,
    /// A simple cycle on at least three vertices.
    Polygon,
    /// A simple 3-connected graph on at least four vertices.
    Rigid,
    /// A block consisting of a single edge.
    Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriComponent {
    pub kind: ComponentKind,
    pub graph: MultiGraph,
    /// Sorted tags of the virtual edges in `graph`.
    pub virtual_tags: Vec<usize>,
}

impl TriComponent {
    pub fn new(kind: ComponentKind, graph: MultiGraph) -> Self {
        let virtual_tags = graph.virtual_tags();
        TriComponent { kind, graph, virtual_tags }
    }

    /// Edge count this component contributes to a complete split into triple bonds,
    /// triangles and rigid pieces.
    pub fn split_edge_count(&self) -> usize {
        match self.kind {
            ComponentKind::Bond | ComponentKind::Polygon => 3 * self.graph.m() - 6,
            ComponentKind::Rigid | ComponentKind::Edge => self.graph.m(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeparatingPair {
    pub x: usize,
    pub y: usize,
    pub split_id: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriconnectedComponents {
    pub components: Vec<TriComponent>,
    /// One entry per virtual tag that survives merging.
    pub pairs: Vec<SeparatingPair>,
}

impl TriconnectedComponents {
    /// Total edge count of the underlying complete split.
    pub fn split_edge_total(&self) -> usize {
        self.components.iter().map(TriComponent::split_edge_count).sum()
    }
}

/// Options for [`triconnected_components_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct TriconnectOptions {
    /// Shuffles the order in which candidate separating pairs are tried.
    pub seed: Option<u64>,
}

/// Separation classes of `b` with respect to `{x,y}`, as sorted lists of edge indices.
pub fn separation_classes(b: &MultiGraph, x: usize, y: usize) -> Vec<Vec<usize>> {
    let n = b.n();
    let xi = b.index_of(x).expect("x in graph");
    let yi = b.index_of(y).expect("y in graph");
    let mut uf = UnionFind::new(n);
    let local: Vec<(usize, usize)> =
        b.edges().iter().map(|e| (b.index_of(e.u).expect("endpoint"), b.index_of(e.v).expect("endpoint"))).collect();
    for &(u, v) in &local {
        if u != xi && u != yi && v != xi && v != yi {
            uf.union(u, v);
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, &(u, v)) in local.iter().enumerate() {
        let inner = [u, v].into_iter().find(|&w| w != xi && w != yi);
        match inner {
            None => classes.push(vec![i]),
            Some(w) => {
                let r = uf.find(w);
                let c = *by_root.entry(r).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[c].push(i);
            }
        }
    }
    classes
}

/// Unique triconnected components of a biconnected multigraph with at least three edges.
pub fn triconnected_components(b: &MultiGraph) -> Result<TriconnectedComponents> {
    triconnected_components_with(b, TriconnectOptions::default())
}

pub fn triconnected_components_with(b: &MultiGraph, opts: TriconnectOptions) -> Result<TriconnectedComponents> {
    if b.m() < 3 || !b.is_biconnected() {
        return Err(Error::NotBiconnected);
    }
    if b.edges().iter().any(|e| e.tag.is_virtual()) {
        return Err(Error::InvalidInput("input block must not carry virtual edges".into()));
    }
    let mut s = Splitter::new(b, opts.seed);
    let all: Vec<usize> = (0..s.arena.len()).collect();
    s.work.push(all);
    while let Some(piece) = s.work.pop() {
        s.process(piece);
    }
    Ok(s.merge(b))
}

#[derive(Clone, Copy)]
struct ArenaEdge {
    u: usize,
    v: usize,
    tag: Option<usize>,
}

struct Splitter {
    arena: Vec<ArenaEdge>,
    next_tag: usize,
    work: Vec<Vec<usize>>,
    finals: Vec<(ComponentKind, Vec<usize>)>,
    rng: Option<ChaCha8Rng>,
    /// Per-vertex slot in the current piece.
    slot: Vec<usize>,
}

impl Splitter {
    fn new(b: &MultiGraph, seed: Option<u64>) -> Self {
        let arena = b
            .edges()
            .iter()
            .map(|e| ArenaEdge { u: b.index_of(e.u).unwrap(), v: b.index_of(e.v).unwrap(), tag: None })
            .collect();
        Splitter {
            arena,
            next_tag: 0,
            work: Vec::new(),
            finals: Vec::new(),
            rng: seed.map(ChaCha8Rng::seed_from_u64),
            slot: vec![usize::MAX; b.n()],
        }
    }

    fn process(&mut self, piece: Vec<usize>) {
        let mut verts: Vec<usize> = piece.iter().flat_map(|&e| [self.arena[e].u, self.arena[e].v]).collect();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() == 2 {
            self.finals.push((ComponentKind::Bond, piece));
            return;
        }
        for (i, &v) in verts.iter().enumerate() {
            self.slot[v] = i;
        }
        let np = verts.len();
        let mut degree = vec![0usize; np];
        let mut pair_count: HashMap<(usize, usize), usize> = HashMap::new();
        for &e in &piece {
            let (a, b) = (self.slot[self.arena[e].u], self.slot[self.arena[e].v]);
            degree[a] += 1;
            degree[b] += 1;
            *pair_count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        if degree.iter().all(|&d| d == 2) {
            self.finals.push((ComponentKind::Polygon, piece));
            return;
        }
        let mut multi: Vec<(usize, usize)> = pair_count.iter().filter(|(_, &c)| c >= 2).map(|(&k, _)| k).collect();
        multi.sort_unstable();
        if let Some(&(a, b)) = multi.first() {
            self.split(&piece, &verts, a, b);
            return;
        }
        let mut adj = vec![Vec::new(); np];
        for &(a, b) in pair_count.keys() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut order: Vec<usize> = (0..np).collect();
        if let Some(rng) = self.rng.as_mut() {
            order.shuffle(rng);
        }
        for x in order {
            let mut arts = articulation_points(&adj, Some(x));
            if arts.is_empty() {
                continue;
            }
            if let Some(rng) = self.rng.as_mut() {
                arts.shuffle(rng);
            }
            self.split(&piece, &verts, x, arts[0]);
            return;
        }
        let kind = if np == 3 { ComponentKind::Polygon } else { ComponentKind::Rigid };
        self.finals.push((kind, piece));
    }

    /// Splits `piece` at the separating pair given by piece-local indices `a`, `b`.
    fn split(&mut self, piece: &[usize], verts: &[usize], a: usize, b: usize) {
        let (x, y) = (verts[a], verts[b]);
        let mut uf = UnionFind::new(verts.len());
        for &e in piece {
            let ArenaEdge { u, v, .. } = self.arena[e];
            if u != x && u != y && v != x && v != y {
                uf.union(self.slot[u], self.slot[v]);
            }
        }
        let mut direct = Vec::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        for &e in piece {
            let ArenaEdge { u, v, .. } = self.arena[e];
            match [u, v].into_iter().find(|&w| w != x && w != y) {
                None => direct.push(e),
                Some(w) => {
                    let r = uf.find(self.slot[w]);
                    let c = *by_root.entry(r).or_insert_with(|| {
                        classes.push(Vec::new());
                        classes.len() - 1
                    });
                    classes[c].push(e);
                }
            }
        }
        let (r, d) = (classes.len(), direct.len());
        debug_assert!(r + d >= 3 || (r == 2 && d == 0), "not a separating pair");
        if r == 2 && d == 0 {
            let tag = self.fresh_tag();
            for mut class in classes {
                class.push(self.virtual_edge(x, y, tag));
                self.work.push(class);
            }
        } else {
            let mut bond = direct;
            for mut class in classes {
                let tag = self.fresh_tag();
                class.push(self.virtual_edge(x, y, tag));
                bond.push(self.virtual_edge(x, y, tag));
                self.work.push(class);
            }
            self.finals.push((ComponentKind::Bond, bond));
        }
    }

    fn fresh_tag(&mut self) -> usize {
        self.next_tag += 1;
        self.next_tag - 1
    }

    fn virtual_edge(&mut self, u: usize, v: usize, tag: usize) -> usize {
        self.arena.push(ArenaEdge { u, v, tag: Some(tag) });
        self.arena.len() - 1
    }

    fn merge(self, b: &MultiGraph) -> TriconnectedComponents {
        let nf = self.finals.len();
        let mut sides: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, (_, edges)) in self.finals.iter().enumerate() {
            for &e in edges {
                if let Some(t) = self.arena[e].tag {
                    sides.entry(t).or_default().push(i);
                }
            }
        }
        let mut uf = UnionFind::new(nf);
        let mut internal = vec![false; self.next_tag];
        for (&t, comps) in &sides {
            debug_assert_eq!(comps.len(), 2, "virtual tag on two components");
            let (p, q) = (comps[0], comps[1]);
            let (kp, kq) = (self.finals[p].0, self.finals[q].0);
            if kp == kq && matches!(kp, ComponentKind::Bond | ComponentKind::Polygon) {
                uf.union(p, q);
                internal[t] = true;
            }
        }
        let mut groups: HashMap<usize, (ComponentKind, Vec<usize>)> = HashMap::new();
        for (i, (kind, edges)) in self.finals.iter().enumerate() {
            let entry = groups.entry(uf.find(i)).or_insert_with(|| (*kind, Vec::new()));
            entry.1.extend(edges.iter().copied().filter(|&e| self.arena[e].tag.is_none_or(|t| !internal[t])));
        }
        let label = |i: usize| b.vertices()[i];
        let mut components: Vec<TriComponent> = groups
            .into_values()
            .map(|(kind, edges)| {
                let mut medges: Vec<MultiEdge> = edges
                    .into_iter()
                    .map(|e| {
                        let ArenaEdge { u, v, tag } = self.arena[e];
                        let (u, v) = (label(u).min(label(v)), label(u).max(label(v)));
                        MultiEdge::new(u, v, tag.map_or(EdgeTag::Real, EdgeTag::Virtual))
                    })
                    .collect();
                medges.sort_unstable();
                TriComponent::new(kind, MultiGraph::from_edges(medges))
            })
            .collect();
        components.sort_by(|a, b| (a.kind, a.graph.edges()).cmp(&(b.kind, b.graph.edges())));
        let mut pairs: Vec<SeparatingPair> = Vec::new();
        for c in &components {
            for e in c.graph.edges() {
                if let EdgeTag::Virtual(t) = e.tag {
                    pairs.push(SeparatingPair { x: e.u, y: e.v, split_id: t });
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        TriconnectedComponents { components, pairs }
    }
}
