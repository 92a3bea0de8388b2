//! Canonical forms and automorphism groups of vertex- and arc-colored graphs.
//!
//! Equitable partition refinement followed by backtracking over individualizations.
//! Arcs are directed for coloring purposes: an undirected edge `{u,v}` may carry one color
//! from `u` to `v` and another from `v` to `u`, and isomorphisms must respect both.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiGraph;
use crate::perm::Permutation;

/// Default cap on the number of automorphisms a single search may return.
pub const DEFAULT_AUT_CAP: usize = 10_000;

#[inline]
pub(crate) fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: u32,
    /// Color of the arc from the owner to `to`.
    out: u64,
    /// Color of the arc from `to` back to the owner.
    inc: u64,
}

/// Graph with vertex colors and directed arc colors on each undirected edge.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    colors: Vec<u64>,
    adj: Vec<Vec<Arc>>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<u64>) -> Self {
        let n = colors.len();
        ColoredGraph { colors, adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    /// Adds the edge `{u,v}` colored `uv` in direction `u→v` and `vu` in direction `v→u`.
    /// Each unordered pair must be added at most once.
    pub fn add_edge(&mut self, u: usize, v: usize, uv: u64, vu: u64) {
        debug_assert_ne!(u, v);
        self.adj[u].push(Arc { to: v as u32, out: uv, inc: vu });
        self.adj[v].push(Arc { to: u as u32, out: vu, inc: uv });
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable_by_key(|a| a.to);
        }
    }

    pub fn color(&self, v: usize) -> u64 {
        self.colors[v]
    }

    /// Whether `p` (vertex `v` maps to `p[v]`) preserves vertex and arc colors.
    pub fn is_automorphism(&self, p: &[u32]) -> bool {
        let n = self.n();
        if p.len() != n {
            return false;
        }
        for v in 0..n {
            let pv = p[v] as usize;
            if self.colors[v] != self.colors[pv] || self.adj[v].len() != self.adj[pv].len() {
                return false;
            }
            for a in &self.adj[v] {
                let target = p[a.to as usize];
                match self.adj[pv].binary_search_by_key(&target, |b| b.to) {
                    Ok(i) if self.adj[pv][i].out == a.out => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// All automorphisms, identity first; errors once more than `cap` are found.
    pub fn automorphisms(&self, cap: usize) -> Result<Vec<Permutation>> {
        let mut g = self.clone();
        g.finish();
        Search::new(&g).automorphisms(cap)
    }

    /// Canonical certificate and the canonical labeling `lab` (position `i` holds vertex `lab[i]`).
    pub fn canonical_form(&self) -> (Vec<u64>, Vec<u32>) {
        let mut g = self.clone();
        g.finish();
        Search::new(&g).canonical()
    }

    fn certificate(&self, lab: &[u32]) -> Vec<u64> {
        let n = self.n();
        let mut pos = vec![0u32; n];
        for (i, &v) in lab.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut cert = Vec::with_capacity(1 + n + 2 * self.adj.iter().map(Vec::len).sum::<usize>() + n);
        cert.push(n as u64);
        cert.extend(lab.iter().map(|&v| self.colors[v as usize]));
        let mut row: Vec<(u32, u64)> = Vec::new();
        for &v in lab {
            row.clear();
            row.extend(self.adj[v as usize].iter().map(|a| (pos[a.to as usize], a.out)));
            row.sort_unstable();
            cert.push(row.len() as u64);
            for &(p, c) in &row {
                cert.push(p as u64);
                cert.push(c);
            }
        }
        cert
    }
}

/// Ordered partition of the vertex set into cells.
#[derive(Clone)]
struct Partition {
    lab: Vec<u32>,
    pos: Vec<u32>,
    /// Start position of each vertex's cell.
    cell: Vec<u32>,
    /// Cell length, valid at cell start positions.
    len: Vec<u32>,
    ncells: usize,
}

impl Partition {
    fn from_colors(colors: &[u64]) -> (Partition, Vec<u32>) {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0u32; n];
        let mut cell = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j < n && colors[lab[j] as usize] == colors[lab[i] as usize] {
                j += 1;
            }
            for p in i..j {
                pos[lab[p] as usize] = p as u32;
                cell[lab[p] as usize] = i as u32;
            }
            len[i] = (j - i) as u32;
            starts.push(i as u32);
            i = j;
        }
        let ncells = starts.len();
        (Partition { lab, pos, cell, len, ncells }, starts)
    }

    fn is_discrete(&self) -> bool {
        self.ncells == self.lab.len()
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<u32> {
        let n = self.lab.len();
        let mut best: Option<(u32, u32)> = None;
        let mut p = 0;
        while p < n {
            let l = self.len[p];
            if l > 1 && best.is_none_or(|(_, bl)| l < bl) {
                best = Some((p as u32, l));
                if l == 2 {
                    break;
                }
            }
            p += l as usize;
        }
        best.map(|(s, _)| s)
    }

    fn swap_positions(&mut self, a: usize, b: usize) {
        let (va, vb) = (self.lab[a], self.lab[b]);
        self.lab[a] = vb;
        self.lab[b] = va;
        self.pos[vb as usize] = a as u32;
        self.pos[va as usize] = b as u32;
    }

    /// Splits `v` off the front of its cell; returns the start of the singleton.
    fn individualize(&mut self, v: u32) -> u32 {
        let c = self.cell[v as usize] as usize;
        let l = self.len[c] as usize;
        debug_assert!(l > 1);
        let p = self.pos[v as usize] as usize;
        self.swap_positions(c, p);
        self.len[c] = 1;
        self.len[c + 1] = (l - 1) as u32;
        for q in c + 1..c + l {
            self.cell[self.lab[q] as usize] = (c + 1) as u32;
        }
        self.ncells += 1;
        c as u32
    }
}

struct Scratch {
    acc: Vec<u64>,
    vstamp: Vec<u32>,
    stamp: u32,
    in_queue: Vec<bool>,
    touched: Vec<u32>,
}

struct Search<'a> {
    g: &'a ColoredGraph,
    s: Scratch,
}

impl<'a> Search<'a> {
    fn new(g: &'a ColoredGraph) -> Self {
        let n = g.n();
        Search {
            g,
            s: Scratch { acc: vec![0; n], vstamp: vec![0; n], stamp: 0, in_queue: vec![false; n], touched: Vec::new() },
        }
    }

    /// Refines `p` to the coarsest equitable refinement reachable from the splitters in
    /// `queue`, returning an invariant hash of the splitting history.
    fn refine(&mut self, p: &mut Partition, initial: &[u32]) -> u64 {
        let n = p.lab.len();
        let mut trace: u64 = mix(p.ncells as u64);
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &c in initial {
            if !self.s.in_queue[c as usize] {
                self.s.in_queue[c as usize] = true;
                queue.push_back(c);
            }
        }
        let mut frag_starts: Vec<u32> = Vec::new();
        while let Some(w) = queue.pop_front() {
            self.s.in_queue[w as usize] = false;
            if p.is_discrete() {
                continue;
            }
            self.s.stamp = self.s.stamp.wrapping_add(1);
            if self.s.stamp == 0 {
                self.s.vstamp.iter_mut().for_each(|x| *x = 0);
                self.s.stamp = 1;
            }
            let stamp = self.s.stamp;
            self.s.touched.clear();
            let wl = p.len[w as usize] as usize;
            for idx in w as usize..w as usize + wl {
                let x = p.lab[idx] as usize;
                for a in &self.g.adj[x] {
                    let v = a.to as usize;
                    if self.s.vstamp[v] != stamp {
                        self.s.vstamp[v] = stamp;
                        self.s.acc[v] = 0;
                        self.s.touched.push(v as u32);
                    }
                    self.s.acc[v] = self.s.acc[v].wrapping_add(mix(a.inc));
                }
            }
            let mut touched = std::mem::take(&mut self.s.touched);
            touched.sort_unstable_by_key(|&v| (p.cell[v as usize], v));
            let mut i = 0;
            while i < touched.len() {
                let c = p.cell[touched[i] as usize] as usize;
                let mut j = i;
                while j < touched.len() && p.cell[touched[j] as usize] as usize == c {
                    j += 1;
                }
                let group = &touched[i..j];
                i = j;
                let l = p.len[c] as usize;
                if l == 1 {
                    continue;
                }
                let t = group.len();
                let end = c + l;
                for (k, &v) in group.iter().enumerate() {
                    let target = end - 1 - k;
                    let from = p.pos[v as usize] as usize;
                    p.swap_positions(from, target);
                }
                let acc = &self.s.acc;
                p.lab[end - t..end].sort_unstable_by_key(|&v| acc[v as usize]);
                for q in end - t..end {
                    p.pos[p.lab[q] as usize] = q as u32;
                }
                frag_starts.clear();
                if t < l {
                    frag_starts.push(c as u32);
                }
                let mut prev: Option<u64> = None;
                for q in end - t..end {
                    let key = acc[p.lab[q] as usize];
                    if prev != Some(key) {
                        frag_starts.push(q as u32);
                        prev = Some(key);
                    }
                }
                if frag_starts.len() == 1 {
                    continue;
                }
                trace = mix(trace ^ mix(c as u64) ^ (frag_starts.len() as u64) << 32);
                for (f, &s) in frag_starts.iter().enumerate() {
                    let fend = frag_starts.get(f + 1).map_or(end, |&x| x as usize);
                    let s = s as usize;
                    p.len[s] = (fend - s) as u32;
                    if s != c {
                        for q in s..fend {
                            p.cell[p.lab[q] as usize] = s as u32;
                        }
                    }
                    let key = if s < end - t { 0 } else { acc[p.lab[s] as usize] };
                    trace = mix(trace.wrapping_add(mix(key) ^ (fend - s) as u64));
                }
                p.ncells += frag_starts.len() - 1;
                if self.s.in_queue[c] {
                    for &s in &frag_starts[1..] {
                        self.s.in_queue[s as usize] = true;
                        queue.push_back(s);
                    }
                } else {
                    let mut largest = frag_starts[0];
                    for &s in &frag_starts {
                        if p.len[s as usize] > p.len[largest as usize] {
                            largest = s;
                        }
                    }
                    for &s in &frag_starts {
                        if s != largest {
                            self.s.in_queue[s as usize] = true;
                            queue.push_back(s);
                        }
                    }
                }
            }
            self.s.touched = touched;
        }
        for c in queue {
            self.s.in_queue[c as usize] = false;
        }
        debug_assert!(p.ncells <= n);
        mix(trace ^ (p.ncells as u64))
    }

    fn root(&mut self) -> (Partition, u64) {
        let (mut p, starts) = Partition::from_colors(&self.g.colors);
        let t = self.refine(&mut p, &starts);
        (p, t)
    }

    fn child(&mut self, p: &Partition, v: u32) -> (Partition, u64) {
        let mut q = p.clone();
        let s = q.individualize(v);
        let t = self.refine(&mut q, &[s]);
        (q, t)
    }

    fn automorphisms(&mut self, cap: usize) -> Result<Vec<Permutation>> {
        let n = self.g.n();
        let mut out = vec![Permutation::identity(n)];
        if n == 0 {
            return Ok(out);
        }
        let (root, _) = self.root();
        let mut targets = Vec::new();
        let mut traces = Vec::new();
        let mut p = root.clone();
        while let Some(t) = p.target_cell() {
            targets.push(t);
            let (q, tr) = self.child(&p, p.lab[t as usize]);
            traces.push(tr);
            p = q;
        }
        let left = p.lab;
        self.aut_dfs(&root, 0, &targets, &traces, &left, cap, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn aut_dfs(
        &mut self,
        p: &Partition,
        level: usize,
        targets: &[u32],
        traces: &[u64],
        left: &[u32],
        cap: usize,
        out: &mut Vec<Permutation>,
    ) -> Result<()> {
        if level == targets.len() {
            let mut images = vec![0u32; left.len()];
            for (i, &v) in left.iter().enumerate() {
                images[v as usize] = p.lab[i];
            }
            if self.g.is_automorphism(&images) {
                let perm = Permutation::from_images(images);
                if !perm.is_identity() {
                    out.push(perm);
                    if out.len() > cap {
                        return Err(Error::CapExceeded { what: "automorphism count", cap });
                    }
                }
            }
            return Ok(());
        }
        let t = targets[level] as usize;
        let cell: Vec<u32> = p.lab[t..t + p.len[t] as usize].to_vec();
        for u in cell {
            let (q, tr) = self.child(p, u);
            if tr == traces[level] {
                self.aut_dfs(&q, level + 1, targets, traces, left, cap, out)?;
            }
        }
        Ok(())
    }

    fn canonical(&mut self) -> (Vec<u64>, Vec<u32>) {
        let (root, tr) = self.root();
        let mut best: Option<(Vec<u64>, Vec<u64>, Vec<u32>)> = None;
        let mut path = vec![tr];
        self.canon_dfs(&root, &mut path, &mut best);
        let (_, cert, lab) = best.expect("search visits at least one leaf");
        (cert, lab)
    }

    fn canon_dfs(&mut self, p: &Partition, path: &mut Vec<u64>, best: &mut Option<(Vec<u64>, Vec<u64>, Vec<u32>)>) {
        if let Some((bpath, _, _)) = best.as_ref() {
            let m = path.len().min(bpath.len());
            if path[..m] < bpath[..m] {
                return;
            }
        }
        match p.target_cell() {
            None => {
                let cert = self.g.certificate(&p.lab);
                let better = match best.as_ref() {
                    None => true,
                    Some((bpath, bcert, _)) => match path.as_slice().cmp(bpath.as_slice()) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => cert > *bcert,
                    },
                };
                if better {
                    *best = Some((path.clone(), cert, p.lab.clone()));
                }
            }
            Some(t) => {
                let t = t as usize;
                let cell: Vec<u32> = p.lab[t..t + p.len[t] as usize].to_vec();
                for u in cell {
                    let (q, tr) = self.child(p, u);
                    path.push(tr);
                    self.canon_dfs(&q, path, best);
                    path.pop();
                }
            }
        }
    }
}

/// Canonical certificate; equal codes iff the inputs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalCode(pub Vec<u64>);

impl CanonicalCode {
    /// Little-endian byte encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }
}

/// Multigraph with ordered pins and optional vertex colors.
///
/// Pins and colors refer to positions in `graph.vertices()`. Isomorphisms map pin `i` to
/// pin `i`, preserve colors, and preserve the number of real and of virtual edges between
/// every pair. Virtual tags themselves are ignored.
#[derive(Clone, Debug)]
pub struct PinnedGraph {
    pub graph: MultiGraph,
    pub pins: Vec<usize>,
    pub colors: Option<Vec<u64>>,
}

impl PinnedGraph {
    pub fn new(graph: MultiGraph) -> Self {
        PinnedGraph { graph, pins: Vec::new(), colors: None }
    }

    /// Pins given by vertex id.
    pub fn pinned(graph: MultiGraph, pins: &[usize]) -> Self {
        let pins = pins.iter().map(|&v| graph.index_of(v).expect("pin is a vertex")).collect();
        PinnedGraph { graph, pins, colors: None }
    }

    pub fn to_colored(&self) -> ColoredGraph {
        let n = self.graph.n();
        let colors = (0..n)
            .map(|i| {
                let role = self.pins.iter().position(|&p| p == i).map_or(0, |r| r as u64 + 1);
                let c = self.colors.as_ref().map_or(0, |c| c[i]);
                assert!(c < 1 << 48 && role < 1 << 16, "color out of range");
                (role << 48) | c
            })
            .collect();
        let mut cg = ColoredGraph::new(colors);
        let mut mult: HashMap<(usize, usize), (u64, u64)> = HashMap::new();
        for e in self.graph.edges() {
            let a = self.graph.index_of(e.u).expect("endpoint");
            let b = self.graph.index_of(e.v).expect("endpoint");
            let entry = mult.entry((a.min(b), a.max(b))).or_default();
            if e.tag.is_virtual() {
                entry.1 += 1;
            } else {
                entry.0 += 1;
            }
        }
        let mut pairs: Vec<_> = mult.into_iter().collect();
        pairs.sort_unstable();
        for ((a, b), (real, virt)) in pairs {
            let c = real | (virt << 32);
            cg.add_edge(a, b, c, c);
        }
        cg
    }
}

pub fn canonical_code(pg: &PinnedGraph) -> CanonicalCode {
    CanonicalCode(pg.to_colored().canonical_form().0)
}

/// Witness bijection when isomorphic: position `i` of `a` maps to vertex id `witness[i]` of `b`.
pub fn are_isomorphic(a: &PinnedGraph, b: &PinnedGraph) -> Option<Vec<usize>> {
    if a.graph.n() != b.graph.n() || a.graph.m() != b.graph.m() || a.pins.len() != b.pins.len() {
        return None;
    }
    let (ca, la) = a.to_colored().canonical_form();
    let (cb, lb) = b.to_colored().canonical_form();
    if ca != cb {
        return None;
    }
    let mut witness = vec![0; la.len()];
    for (i, &v) in la.iter().enumerate() {
        witness[v as usize] = b.graph.vertices()[lb[i] as usize];
    }
    Some(witness)
}

/// Pin- and color-preserving automorphisms on positions `0..n`, identity first.
pub fn automorphisms(pg: &PinnedGraph, cap: usize) -> Result<Vec<Permutation>> {
    pg.to_colored().automorphisms(cap)
}

/// One isomorphism class of [`group_by_isomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoClass {
    pub representative: usize,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

/// Partition into isomorphism classes, ordered by first member.
pub fn group_by_isomorphism(items: &[PinnedGraph]) -> Vec<IsoClass> {
    let mut index: HashMap<CanonicalCode, usize> = HashMap::new();
    let mut classes: Vec<IsoClass> = Vec::new();
    for (i, pg) in items.iter().enumerate() {
        let code = canonical_code(pg);
        match index.get(&code) {
            Some(&c) => {
                classes[c].multiplicity += 1;
                classes[c].members.push(i);
            }
            None => {
                index.insert(code, classes.len());
                classes.push(IsoClass { representative: i, multiplicity: 1, members: vec![i] });
            }
        }
    }
    classes
}
