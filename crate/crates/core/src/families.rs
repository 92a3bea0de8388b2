//! Graph families used by tests, verification sweeps and benchmarks.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, MultiGraph};
use crate::isomorphism::{canonical_code, PinnedGraph};

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("family generators emit simple graphs")
}

pub fn path(n: usize) -> Graph {
    build(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need three vertices");
    build(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
}

pub fn complete(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    build(n, &e)
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, &(1..=leaves).map(|i| (0, i)).collect::<Vec<_>>())
}

/// Hub 0 joined to a rim cycle on `1..n`.
pub fn wheel(n: usize) -> Graph {
    assert!(n >= 4, "wheels need a rim of three");
    let rim = n - 1;
    let mut e: Vec<_> = (1..n).map(|i| (0, i)).collect();
    e.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
    build(n, &e)
}

/// Series-parallel chain: junctions `0..=p`, consecutive junctions joined by two paths of
/// length two, and an edge closing the first junction to the last. `3p + 1` vertices.
pub fn sp_chain(p: usize) -> Graph {
    assert!(p >= 2, "chains need two links");
    let junctions = p + 1;
    let mut e = Vec::new();
    let mut next = junctions;
    for i in 0..p {
        for _ in 0..2 {
            e.push((i, next));
            e.push((next, i + 1));
            next += 1;
        }
    }
    e.push((0, p));
    build(next, &e)
}

/// Largest series-parallel chain with at most `n` vertices.
pub fn sp_chain_with_n(n: usize) -> Graph {
    sp_chain(((n.max(7)) - 1) / 3)
}

/// Cycle `0..n` where vertex `i` carries a pendant path of length `pattern[i % len]`.
pub fn pendant_cycle(n: usize, pattern: &[usize]) -> Graph {
    let mut e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let mut next = n;
    for i in 0..n {
        let mut prev = i;
        for _ in 0..pattern[i % pattern.len()] {
            e.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    build(next, &e)
}

/// Ring of `t` chiral gadgets: each hub `v_i` reaches `v_{i+1}` through a path `v_i p q`,
/// with a pendant leaf on `p`. The automorphism group is cyclic of order `t`.
pub fn chiral_cycle(t: usize) -> Graph {
    assert!(t >= 3);
    let mut e = Vec::new();
    for i in 0..t {
        let (p, q, leaf) = (t + 3 * i, t + 3 * i + 1, t + 3 * i + 2);
        e.extend([(i, p), (p, q), (q, (i + 1) % t), (p, leaf)]);
    }
    build(4 * t, &e)
}

/// Erdős–Rényi graph conditioned on connectivity by retrying.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    loop {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    e.push((i, j));
                }
            }
        }
        let g = build(n, &e);
        if g.is_connected() {
            return g;
        }
    }
}

/// Random tree by attaching each vertex to an earlier one.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let e: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    build(n, &e)
}

/// Random labeled relabeling of `g`.
pub fn shuffled<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    g.permuted(&perm)
}

fn code_of(g: &Graph) -> Vec<u64> {
    canonical_code(&PinnedGraph::new(MultiGraph::from_graph(g))).0
}

/// One representative of every connected graph on `n` vertices up to isomorphism.
///
/// Every connected graph has a vertex whose removal leaves it connected, so the graphs on
/// `n` vertices arise from those on `n - 1` by adding a vertex with a nonempty neighbourhood.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![Graph::new(1)];
    for size in 2..=n {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let base = g.edges();
            for mask in 1u64..1 << (size - 1) {
                let mut e = base.clone();
                e.extend((0..size - 1).filter(|&i| mask >> i & 1 == 1).map(|i| (i, size - 1)));
                let h = build(size, &e);
                if seen.insert(code_of(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// All connected graphs on `1..=max_n` vertices up to isomorphism.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

pub fn is_tree(g: &Graph) -> bool {
    g.is_connected() && g.m() + 1 == g.n()
}

pub fn is_cycle(g: &Graph) -> bool {
    g.n() >= 3 && g.is_connected() && (0..g.n()).all(|v| g.degree(v) == 2)
}

/// Planarity by trying to embed each block with the Demoucron–Malgrange–Pertuiset
/// path-addition method.
pub fn is_planar(g: &Graph) -> bool {
    if g.n() <= 4 {
        return true;
    }
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return false;
    }
    let Ok(bd) = crate::graph::blocks_and_cut_vertices(g) else {
        // disconnected: planar iff every component is
        return crate::graph::connected_components(g).iter().all(|c| is_planar(&c.graph));
    };
    bd.blocks.iter().all(|b| {
        let local: Vec<(usize, usize)> =
            b.edges().iter().map(|e| (b.index_of(e.u).unwrap(), b.index_of(e.v).unwrap())).collect();
        dmp_planar(b.n(), &local)
    })
}

/// Demoucron–Malgrange–Pertuiset on a biconnected simple graph.
fn dmp_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    if n <= 4 || edges.len() <= 3 {
        return true;
    }
    if edges.len() > 3 * n - 6 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let Some(cycle) = find_cycle(&adj) else { return true };
    let mut in_h = vec![false; n];
    let mut h_edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h[a] = true;
        h_edges.insert((a.min(b), a.max(b)));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    loop {
        let fragments = fragments(&adj, &in_h, &h_edges);
        if fragments.is_empty() {
            return true;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> =
                (0..faces.len()).filter(|&f| frag.attachments.iter().all(|a| faces[f].contains(a))).collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("some fragment");
        let frag = &fragments[fi];
        let p = fragment_path(&adj, &in_h, frag);
        for w in p.windows(2) {
            h_edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        for &v in &p {
            in_h[v] = true;
        }
        let f = faces.swap_remove(face);
        let (a, b) = (p[0], *p.last().unwrap());
        let ia = f.iter().position(|&x| x == a).unwrap();
        let ib = f.iter().position(|&x| x == b).unwrap();
        let arc = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(f[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % f.len();
            }
            out
        };
        let inner: Vec<usize> = p[1..p.len() - 1].to_vec();
        // face 1: arc a..b then the path back from b to a
        let mut f1 = arc(ia, ib);
        f1.extend(inner.iter().rev());
        let mut f2 = arc(ib, ia);
        f2.extend(inner.iter());
        faces.push(f1);
        faces.push(f2);
    }
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![(0usize, 0usize)];
    depth[0] = 0;
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        if *i == adj[v].len() {
            stack.pop();
            continue;
        }
        let w = adj[v][*i];
        *i += 1;
        if depth[w] == usize::MAX {
            depth[w] = depth[v] + 1;
            parent[w] = v;
            stack.push((w, 0));
        } else if w != parent[v] && depth[w] < depth[v] {
            let mut cyc = vec![v];
            let mut x = v;
            while x != w {
                x = parent[x];
                cyc.push(x);
            }
            return Some(cyc);
        }
    }
    None
}

struct Fragment {
    /// Vertices outside H, empty for a chord.
    inner: Vec<usize>,
    /// H-vertices the fragment touches.
    attachments: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(adj: &[Vec<usize>], in_h: &[bool], h_edges: &HashSet<(usize, usize)>) -> Vec<Fragment> {
    let n = adj.len();
    let mut out = Vec::new();
    for u in 0..n {
        if !in_h[u] {
            continue;
        }
        for &v in &adj[u] {
            if in_h[v] && u < v && !h_edges.contains(&(u, v)) {
                out.push(Fragment { inner: vec![], attachments: vec![u, v], chord: Some((u, v)) });
            }
        }
    }
    let mut seen = vec![false; n];
    for s in 0..n {
        if in_h[s] || seen[s] {
            continue;
        }
        let mut inner = vec![s];
        let mut attach = HashSet::new();
        seen[s] = true;
        let mut i = 0;
        while i < inner.len() {
            let v = inner[i];
            i += 1;
            for &w in &adj[v] {
                if in_h[w] {
                    attach.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    inner.push(w);
                }
            }
        }
        let mut attachments: Vec<usize> = attach.into_iter().collect();
        attachments.sort_unstable();
        out.push(Fragment { inner, attachments, chord: None });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(adj: &[Vec<usize>], in_h: &[bool], frag: &Fragment) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let inside: HashSet<usize> = frag.inner.iter().copied().collect();
    let start = frag.attachments[0];
    let first = *adj[start].iter().find(|w| inside.contains(w)).expect("attachment touches the fragment");
    let mut prev = vec![usize::MAX; adj.len()];
    prev[first] = start;
    let mut queue = std::collections::VecDeque::from([first]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if in_h[w] && w != start {
                let mut p = vec![w, v];
                let mut x = v;
                while x != first {
                    x = prev[x];
                    p.push(x);
                }
                p.push(start);
                p.reverse();
                return p;
            }
            if inside.contains(&w) && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("a fragment of a biconnected graph has two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn family_shapes() {
        assert_eq!(wheel(6).m(), 10);
        let sp = sp_chain(3);
        assert_eq!((sp.n(), sp.m()), (10, 13));
        assert_eq!(pendant_cycle(4, &[1, 0]).n(), 6);
        assert_eq!(chiral_cycle(5).n(), 20);
        assert!(is_tree(&star(4)));
        assert!(is_cycle(&cycle(7)));
    }

    #[test]
    fn planarity() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        let k33 = build(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
        assert!(!is_planar(&k33));
        assert!(is_planar(&wheel(9)));
        assert!(is_planar(&sp_chain(4)));
        // Petersen graph
        let mut e: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        e.extend((0..5).map(|i| (i, i + 5)));
        e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        assert!(!is_planar(&build(10, &e)));
        // planar graphs on 6 vertices: 99 of the 112 connected ones
        assert_eq!(connected_graphs(6).iter().filter(|g| is_planar(g)).count(), 99);
    }
}
