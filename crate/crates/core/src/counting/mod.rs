//! Counting distinguishing labelings bottom-up over the decomposition tree.
//!
//! Every node of the tree stores, for the graph `G(T_v)` below it, the number of classes of
//! distinguishing labelings relative to the structure its parent keeps fixed: a cut vertex,
//! an ordered pair, or an unordered pair. Isomorphic subtrees are detected with structural
//! codes computed in the same bottom-up pass.

pub mod engines;
mod poly;

use std::collections::HashMap;

use log::debug;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedSub, One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{build_decomposition_tree_with, DecompTree, NodeKind, NodePayload};
use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, MultiGraph};
use crate::group::{classify_group, GroupCase, GroupProfile, PermGroup};
use crate::isomorphism::{ColoredGraph, DEFAULT_AUT_CAP};
use crate::perm::Permutation;
use crate::triconnect::TriconnectOptions;

pub use engines::{
    applicable_engines, count_closed, count_full_pie, count_mobius, count_plain, count_structured,
    count_trivial_stabilizer, run_engine, select_engine, Engine, EngineCaps, OrbitWeight, PlainWeight,
};
pub use poly::DPolynomial;

#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    /// Cap on the automorphism list of a single component.
    pub aut_cap: usize,
    pub caps: EngineCaps,
    pub triconnect: TriconnectOptions,
    /// Evaluate the nodes of a tree level concurrently.
    pub parallel: bool,
    /// Run every applicable engine at each component and require agreement.
    pub cross_check: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            aut_cap: DEFAULT_AUT_CAP,
            caps: EngineCaps::default(),
            triconnect: TriconnectOptions::default(),
            parallel: true,
            cross_check: false,
        }
    }
}

/// What a component node keeps fixed, as demanded by its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Star {
    Free,
    Vertex(usize),
    Pair(usize, usize),
}

/// Exact counts for one node and one `k`.
///
/// `fix` is the count with the attachment fixed pointwise (the cut vertex, or both ends of
/// the pair). For pair contexts `edge` fixes the pair only setwise, `bad` counts the
/// pointwise classes preserved by some swap of the pair, and `same`/`diff` split `edge` by
/// whether the two ends share a label. Elsewhere `edge = fix` and the rest are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bundle {
    pub fix: BigUint,
    pub edge: BigUint,
    pub bad: BigUint,
    pub same: BigUint,
    pub diff: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistResult {
    pub k: u64,
    /// Distinguishing labelings.
    pub l: BigUint,
    /// Distinguishing labelings up to automorphism.
    pub d: BigUint,
    pub aut: BigUint,
}

/// Summary of the group acting at a component node.
#[derive(Clone, Debug, Serialize)]
pub struct GroupSummary {
    pub node: usize,
    pub star: Star,
    pub order: usize,
    pub case: GroupCase,
    pub engine: Engine,
    /// Order of the setwise pair stabilizer when it is larger.
    pub edge_order: Option<usize>,
}

struct ClassInfo {
    rep: usize,
    mult: usize,
}

struct PairClass {
    rep: usize,
    mult: usize,
    /// Class of the same graphs with the pair reversed.
    rev: Option<usize>,
}

struct GroupPrep {
    group: PermGroup,
    profile: GroupProfile,
    engine: Engine,
}

struct TPrep {
    star: Star,
    vertex_child: Vec<Option<usize>>,
    /// S-children; child `j` owns tokens `n_h + 2j` (low to high end) and `n_h + 2j + 1`.
    tokens: Vec<usize>,
    fix: GroupPrep,
    edge: Option<GroupPrep>,
}

enum Prep {
    C { classes: Vec<ClassInfo> },
    S { wx: Option<usize>, wy: Option<usize>, classes: Vec<PairClass>, swap: bool },
    T(Box<TPrep>),
}

struct NodeInfo {
    prep: Prep,
    /// For pair nodes: codes pinned (low, high) and (high, low). Otherwise both equal.
    code: (u64, u64),
    aut_fix: BigUint,
    aut_edge: BigUint,
}

struct Pending {
    prep: Prep,
    keys: (Vec<u64>, Vec<u64>),
    aut_fix: BigUint,
    aut_edge: BigUint,
}

const C_TAG: u64 = 1;
const S_TAG: u64 = 2;
const T_TAG: u64 = 3;
const ROLE_SHIFT: u32 = 60;

#[derive(Default)]
struct Interner {
    ids: HashMap<Vec<u64>, u64>,
}

impl Interner {
    fn intern(&mut self, key: Vec<u64>) -> u64 {
        let next = self.ids.len() as u64 + 1;
        *self.ids.entry(key).or_insert(next)
    }
}

pub(crate) fn binom(n: &BigUint, m: usize) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..m {
        let i = BigUint::from(i);
        if &i >= n {
            return BigUint::zero();
        }
        acc = acc * (n - &i) / (i + 1u32);
    }
    acc
}

fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * i)
}

fn div_exact(a: &BigUint, b: &BigUint, what: &str) -> Result<BigUint> {
    let (q, r) = a.div_rem(b);
    if !r.is_zero() {
        return Err(Error::invariant(format!("{what}: {a} is not divisible by {b}")));
    }
    Ok(q)
}

fn map_nodes<T: Send>(nodes: &[usize], parallel: bool, f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    if parallel && nodes.len() > 1 {
        nodes.par_iter().map(|&v| f(v)).collect()
    } else {
        nodes.iter().map(|&v| f(v)).collect()
    }
}

/// Counting data for a connected graph: its decomposition tree with every node's structural
/// code, stabilizer order and component group prepared once for all `k`.
pub struct TreeAnalysis {
    tree: DecompTree,
    infos: Vec<NodeInfo>,
    opts: AnalysisOptions,
}

impl TreeAnalysis {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_options(g, AnalysisOptions::default())
    }

    pub fn with_options(g: &Graph, opts: AnalysisOptions) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let tree = build_decomposition_tree_with(g, opts.triconnect)?;
        Self::from_tree(tree, opts)
    }

    pub fn from_tree(tree: DecompTree, opts: AnalysisOptions) -> Result<Self> {
        Self::from_tree_shared(tree, opts, &mut Interner::default())
    }

    /// Codes from a shared interner are comparable across trees.
    fn from_tree_shared(tree: DecompTree, opts: AnalysisOptions, interner: &mut Interner) -> Result<Self> {
        let mut slots: Vec<Option<NodeInfo>> = (0..tree.nodes.len()).map(|_| None).collect();
        for level in tree.levels_bottom_up() {
            let pending = {
                let ctx = PrepContext { tree: &tree, infos: &slots, opts: &opts };
                map_nodes(&level, opts.parallel, |v| ctx.prep(v))?
            };
            for (v, p) in level.into_iter().zip(pending) {
                let same = p.keys.0 == p.keys.1;
                let c0 = interner.intern(p.keys.0);
                let c1 = if same { c0 } else { interner.intern(p.keys.1) };
                slots[v] = Some(NodeInfo { prep: p.prep, code: (c0, c1), aut_fix: p.aut_fix, aut_edge: p.aut_edge });
            }
        }
        let infos = slots.into_iter().map(|s| s.expect("every level processed")).collect();
        Ok(TreeAnalysis { tree, infos, opts })
    }

    pub fn tree(&self) -> &DecompTree {
        &self.tree
    }

    /// `|Aut(G)|`.
    pub fn aut_order(&self) -> BigUint {
        let root = &self.infos[self.tree.root];
        match self.tree.node(self.tree.root).kind() {
            NodeKind::S => root.aut_edge.clone(),
            _ => root.aut_fix.clone(),
        }
    }

    /// Stabilizer orders of `G(T_v)`: pointwise and setwise on the attachment.
    pub fn node_aut(&self, v: usize) -> (BigUint, BigUint) {
        (self.infos[v].aut_fix.clone(), self.infos[v].aut_edge.clone())
    }

    /// Structural codes of `G(T_v)`; equal codes mean isomorphic pinned subtree graphs.
    pub fn node_code(&self, v: usize) -> (u64, u64) {
        self.infos[v].code
    }

    pub fn star(&self, v: usize) -> Star {
        star_of(&self.tree, v)
    }

    pub fn group_summaries(&self) -> Vec<GroupSummary> {
        self.infos
            .iter()
            .enumerate()
            .filter_map(|(v, info)| match &info.prep {
                Prep::T(t) => Some(GroupSummary {
                    node: v,
                    star: t.star,
                    order: t.fix.group.order(),
                    case: t.fix.profile.case,
                    engine: t.fix.engine,
                    edge_order: t.edge.as_ref().map(|e| e.group.order()),
                }),
                _ => None,
            })
            .collect()
    }

    /// The groups acting at component nodes, pointwise and setwise variants.
    pub fn component_groups(&self) -> Vec<(&PermGroup, &GroupProfile)> {
        let mut out = Vec::new();
        for info in &self.infos {
            if let Prep::T(t) = &info.prep {
                out.push((&t.fix.group, &t.fix.profile));
                if let Some(e) = &t.edge {
                    out.push((&e.group, &e.profile));
                }
            }
        }
        out
    }

    /// Bundles of every node for this `k`.
    pub fn bundles(&self, k: u64) -> Result<Vec<Bundle>> {
        let mut slots: Vec<Option<Bundle>> = vec![None; self.tree.nodes.len()];
        if k == 0 {
            return Ok(vec![Bundle::default(); self.tree.nodes.len()]);
        }
        let kb = BigUint::from(k);
        for level in self.tree.levels_bottom_up() {
            let done = {
                let slots = &slots;
                let get = |c: usize| slots[c].as_ref().expect("children are evaluated first");
                map_nodes(&level, self.opts.parallel, |v| self.evaluate(v, &kb, &get))?
            };
            for (v, b) in level.into_iter().zip(done) {
                slots[v] = Some(b);
            }
        }
        Ok(slots.into_iter().map(|b| b.expect("all levels evaluated")).collect())
    }

    pub fn count(&self, k: u64) -> Result<DistResult> {
        let aut = self.aut_order();
        if k == 0 {
            return Ok(DistResult { k, l: BigUint::zero(), d: BigUint::zero(), aut });
        }
        let bundles = self.bundles(k)?;
        let root = &bundles[self.tree.root];
        let d = match self.tree.node(self.tree.root).kind() {
            NodeKind::S => root.edge.clone(),
            _ => root.fix.clone(),
        };
        Ok(DistResult { k, l: &d * &aut, d, aut })
    }

    fn evaluate<'b>(&self, v: usize, k: &BigUint, get: &(dyn Fn(usize) -> &'b Bundle + Sync)) -> Result<Bundle> {
        let k2 = k * k;
        match &self.infos[v].prep {
            Prep::C { classes } => {
                let mut fix = k.clone();
                for c in classes {
                    fix *= binom(&div_exact(&get(c.rep).fix, k, "cut-vertex child")?, c.mult);
                }
                Ok(Bundle { edge: fix.clone(), fix, ..Bundle::default() })
            }
            Prep::S { wx, wy, classes, swap } => {
                let side = |w: &Option<usize>| -> Result<BigUint> {
                    match w {
                        Some(w) => div_exact(&get(*w).fix, k, "cut vertex at a pair"),
                        None => Ok(BigUint::one()),
                    }
                };
                let (fx, fy) = (side(wx)?, side(wy)?);
                let mut per_class = Vec::with_capacity(classes.len());
                let mut fix = &k2 * &fx * &fy;
                for c in classes {
                    let per = div_exact(&get(c.rep).fix, &k2, "pair child")?;
                    fix *= binom(&per, c.mult);
                    per_class.push(per);
                }
                if !swap {
                    return Ok(pair_bundle(fix.clone(), fix, k));
                }
                let mut bad = k * &fx;
                for (i, c) in classes.iter().enumerate() {
                    let rev = c.rev.ok_or_else(|| Error::invariant("swap without a reversed class"))?;
                    if rev == i {
                        let fixed = div_exact(&get(c.rep).bad, k, "swap-fixed classes")?;
                        let moved = per_class[i]
                            .checked_sub(&fixed)
                            .ok_or_else(|| Error::invariant("more swap-fixed classes than classes"))?;
                        let pairs = div_exact(&moved, &BigUint::from(2u32), "swapped class pairs")?;
                        let mut term = BigUint::zero();
                        for l in 0..=c.mult / 2 {
                            term += binom(&pairs, l) * binom(&fixed, c.mult - 2 * l);
                        }
                        bad *= term;
                    } else if i < rev {
                        bad *= binom(&per_class[i], c.mult);
                    }
                }
                let good = fix.checked_sub(&bad).ok_or_else(|| Error::invariant("B exceeds the pair count"))?;
                let edge = div_exact(&good, &BigUint::from(2u32), "edge-fixed classes")?;
                Ok(Bundle { bad, ..pair_bundle(fix, edge, k) })
            }
            Prep::T(t) => {
                let n_h = t.vertex_child.len();
                let vertex = t
                    .vertex_child
                    .iter()
                    .map(|c| c.map_or_else(|| k.clone(), |c| get(c).fix.clone()))
                    .collect::<Vec<_>>();
                let mut tokens = Vec::with_capacity(t.tokens.len());
                for &s in &t.tokens {
                    let b = get(s);
                    tokens.push((div_exact(&b.fix, &k2, "pair child")?, div_exact(&b.bad, k, "swap-fixed classes")?));
                }
                let w = TokenWeight { vertex, tokens, n_h };
                let fix_l = self.run(&t.fix, &w)?;
                let fix = div_exact(&fix_l, &BigUint::from(t.fix.group.order()), "component count")?;
                match (&t.edge, t.star) {
                    (Some(e), _) => {
                        let edge_l = self.run(e, &w)?;
                        let edge = div_exact(&edge_l, &BigUint::from(e.group.order()), "edge-fixed component count")?;
                        let twice = &edge * 2u32;
                        let bad = fix.checked_sub(&twice).ok_or_else(|| Error::invariant("edge count exceeds half"))?;
                        Ok(Bundle { bad, ..pair_bundle(fix, edge, k) })
                    }
                    (None, Star::Pair(..)) => Ok(pair_bundle(fix.clone(), fix, k)),
                    (None, _) => Ok(Bundle { edge: fix.clone(), fix, ..Bundle::default() }),
                }
            }
        }
    }

    fn run(&self, g: &GroupPrep, w: &TokenWeight) -> Result<BigUint> {
        let value = run_engine(g.engine, &g.group, &g.profile, w, self.opts.caps)?;
        if self.opts.cross_check {
            for e in applicable_engines(&g.profile, self.opts.caps) {
                if e == g.engine {
                    continue;
                }
                let other = run_engine(e, &g.group, &g.profile, w, self.opts.caps)?;
                if other != value {
                    return Err(Error::invariant(format!(
                        "engines disagree on a group of order {}: {:?} gives {value}, {e:?} gives {other}",
                        g.group.order(),
                        g.engine
                    )));
                }
            }
        }
        Ok(value)
    }
}

/// Bundle for a pair context given the pointwise and setwise counts.
fn pair_bundle(fix: BigUint, edge: BigUint, k: &BigUint) -> Bundle {
    let per_pair = &fix / (k * k);
    let same_pointwise = k * &per_pair;
    let (same, diff) = if edge == fix {
        (same_pointwise.clone(), &fix - &same_pointwise)
    } else {
        // pointwise classes with distinct end labels always pair up under the swap
        let diff = k * (k - 1u32) / 2u32 * &per_pair;
        (&edge - &diff, diff)
    };
    Bundle { bad: BigUint::zero(), fix, edge, same, diff }
}

/// Fixed-state counts at a component: vertex orbits carry the cut-vertex child's count (or
/// `k`), token orbits carry the pair child's count per end labels, or its swap-fixed count
/// per label when the orbit contains both orientations of a pair.
struct TokenWeight {
    vertex: Vec<BigUint>,
    tokens: Vec<(BigUint, BigUint)>,
    n_h: usize,
}

impl OrbitWeight for TokenWeight {
    fn domain(&self) -> usize {
        self.n_h + 2 * self.tokens.len()
    }

    fn weight(&self, roots: &[u32]) -> BigUint {
        let mut acc = BigUint::one();
        for (i, kappa) in self.vertex.iter().enumerate() {
            if roots[i] as usize == i {
                acc *= kappa;
            }
        }
        for t in self.n_h..self.domain() {
            if roots[t] as usize != t {
                continue;
            }
            let j = (t - self.n_h) / 2;
            let mirror_root = roots[self.n_h + ((t - self.n_h) ^ 1)] as usize;
            // an orbit and its mirror image are counted once, at the smaller root
            if mirror_root == t {
                acc *= &self.tokens[j].1;
            } else if t < mirror_root {
                acc *= &self.tokens[j].0;
            }
        }
        acc
    }
}

fn star_of(tree: &DecompTree, v: usize) -> Star {
    match tree.node(v).parent.map(|p| &tree.node(p).payload) {
        None => Star::Free,
        Some(NodePayload::Cut(a)) => Star::Vertex(*a),
        Some(NodePayload::Pair(x, y)) => Star::Pair(*x, *y),
        Some(NodePayload::Component(_)) => Star::Free,
    }
}

struct PrepContext<'a> {
    tree: &'a DecompTree,
    infos: &'a [Option<NodeInfo>],
    opts: &'a AnalysisOptions,
}

impl PrepContext<'_> {
    fn info(&self, v: usize) -> &NodeInfo {
        self.infos[v].as_ref().expect("children are prepared first")
    }

    /// Code of child `c` seen from cut vertex `a`.
    fn code_from(&self, c: usize, a: usize) -> u64 {
        let info = self.info(c);
        match self.tree.node(c).payload {
            NodePayload::Pair(x, _) if x != a => info.code.1,
            _ => info.code.0,
        }
    }

    fn prep(&self, v: usize) -> Result<Pending> {
        let node = self.tree.node(v);
        match &node.payload {
            NodePayload::Cut(a) => self.prep_c(v, *a),
            NodePayload::Pair(x, y) => self.prep_s(v, *x, *y),
            NodePayload::Component(_) => self.prep_t(v),
        }
    }

    fn prep_c(&self, v: usize, a: usize) -> Result<Pending> {
        let mut by_code: Vec<(u64, usize, usize)> = Vec::new();
        for &c in &self.tree.node(v).children {
            let code = self.code_from(c, a);
            match by_code.iter_mut().find(|e| e.0 == code) {
                Some(e) => e.2 += 1,
                None => by_code.push((code, c, 1)),
            }
        }
        let mut aut = BigUint::one();
        for &(_, rep, mult) in &by_code {
            aut *= Pow::pow(&self.info(rep).aut_fix, mult) * factorial(mult);
        }
        let mut key: Vec<u64> = Vec::with_capacity(by_code.len() + 1);
        key.push(C_TAG);
        for &(code, _, mult) in &by_code {
            key.extend(std::iter::repeat_n(code, mult));
        }
        key[1..].sort_unstable();
        let classes = by_code.into_iter().map(|(_, rep, mult)| ClassInfo { rep, mult }).collect();
        Ok(Pending { prep: Prep::C { classes }, keys: (key.clone(), key), aut_edge: aut.clone(), aut_fix: aut })
    }

    fn prep_s(&self, v: usize, x: usize, y: usize) -> Result<Pending> {
        let (mut wx, mut wy) = (None, None);
        let mut by_code: Vec<(u64, u64, usize, usize)> = Vec::new();
        for &c in &self.tree.node(v).children {
            match self.tree.node(c).payload {
                NodePayload::Cut(a) if a == x => wx = Some(c),
                NodePayload::Cut(a) if a == y => wy = Some(c),
                NodePayload::Component(_) => {
                    let (fwd, rev) = self.info(c).code;
                    match by_code.iter_mut().find(|e| e.0 == fwd) {
                        Some(e) => e.3 += 1,
                        None => by_code.push((fwd, rev, c, 1)),
                    }
                }
                _ => return Err(Error::invariant("unexpected child of a pair node")),
            }
        }
        let cx = wx.map_or(0, |w| self.info(w).code.0);
        let cy = wy.map_or(0, |w| self.info(w).code.0);
        let key = |first: u64, second: u64, pick: fn(&(u64, u64, usize, usize)) -> u64| {
            let mut codes: Vec<u64> = by_code.iter().flat_map(|e| std::iter::repeat_n(pick(e), e.3)).collect();
            codes.sort_unstable();
            let mut k = vec![S_TAG, first, second];
            k.extend(codes);
            k
        };
        let key_xy = key(cx, cy, |e| e.0);
        let key_yx = key(cy, cx, |e| e.1);
        let swap = key_xy == key_yx;
        let classes: Vec<PairClass> = by_code
            .iter()
            .map(|e| PairClass { rep: e.2, mult: e.3, rev: by_code.iter().position(|f| f.0 == e.1) })
            .collect();
        let mut aut = BigUint::one();
        for w in [wx, wy].into_iter().flatten() {
            aut *= &self.info(w).aut_fix;
        }
        for c in &classes {
            aut *= Pow::pow(&self.info(c.rep).aut_fix, c.mult) * factorial(c.mult);
        }
        let aut_edge = if swap { &aut * 2u32 } else { aut.clone() };
        Ok(Pending { prep: Prep::S { wx, wy, classes, swap }, keys: (key_xy, key_yx), aut_fix: aut, aut_edge })
    }

    fn prep_t(&self, v: usize) -> Result<Pending> {
        let node = self.tree.node(v);
        let h: &MultiGraph = &node.component().expect("component node").graph;
        let n_h = h.n();
        let pos = |x: usize| h.index_of(x).ok_or_else(|| Error::invariant("attachment outside its component"));
        let star = star_of(self.tree, v);
        let mut vertex_child = vec![None; n_h];
        let mut tokens = Vec::new();
        let mut token_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut token_pos = Vec::new();
        for &c in &node.children {
            match self.tree.node(c).payload {
                NodePayload::Cut(a) => vertex_child[pos(a)?] = Some(c),
                NodePayload::Pair(p, q) => {
                    let (pp, qq) = (pos(p)?, pos(q)?);
                    token_of.insert((pp, qq), tokens.len());
                    token_pos.push((pp, qq));
                    tokens.push(c);
                }
                NodePayload::Component(_) => return Err(Error::invariant("component node below a component")),
            }
        }
        let parent_pair = match star {
            Star::Pair(x, y) => Some((pos(x)?, pos(y)?)),
            _ => None,
        };
        let mut pairs: HashMap<(usize, usize), (u64, bool)> = HashMap::new();
        for e in h.edges() {
            let (a, b) = (pos(e.u)?, pos(e.v)?);
            let entry = pairs.entry((a.min(b), a.max(b))).or_default();
            if e.tag.is_virtual() {
                entry.1 = true;
            } else {
                entry.0 += 1;
            }
        }
        let mut arcs: Vec<(usize, usize, u64, u64)> = Vec::with_capacity(pairs.len());
        for ((a, b), (real, virt)) in pairs {
            let (ab, ba) = if !virt {
                (0, 0)
            } else if parent_pair == Some((a, b)) {
                (2, 2)
            } else if let Some(&j) = token_of.get(&(a, b)) {
                let (fwd, rev) = self.info(tokens[j]).code;
                (fwd << 2, rev << 2)
            } else {
                return Err(Error::invariant("virtual edge without a pair node"));
            };
            arcs.push((a, b, real | ab, real | ba));
        }
        arcs.sort_unstable();
        let base: Vec<u64> = vertex_child.iter().map(|c| c.map_or(0, |c| self.info(c).code.0)).collect();
        let colored = |roles: &[(usize, u64)]| {
            let mut colors = base.clone();
            for &(p, r) in roles {
                colors[p] |= r << ROLE_SHIFT;
            }
            let mut cg = ColoredGraph::new(colors);
            for &(a, b, ab, ba) in &arcs {
                cg.add_edge(a, b, ab, ba);
            }
            cg
        };
        let cert = |roles: &[(usize, u64)]| {
            let mut key = vec![T_TAG];
            key.extend(colored(roles).canonical_form().0);
            key
        };
        let cap = self.opts.aut_cap;
        let (fix_perms, edge_perms, keys) = match star {
            Star::Free => {
                let key = cert(&[]);
                (colored(&[]).automorphisms(cap)?, None, (key.clone(), key))
            }
            Star::Vertex(a) => {
                let pa = pos(a)?;
                let key = cert(&[(pa, 1)]);
                (colored(&[(pa, 1)]).automorphisms(cap)?, None, (key.clone(), key))
            }
            Star::Pair(x, y) => {
                let (px, py) = (pos(x)?, pos(y)?);
                let setwise = colored(&[(px, 1), (py, 1)]).automorphisms(cap)?;
                let pointwise: Vec<Permutation> = setwise.iter().filter(|p| p.apply(px) == px).cloned().collect();
                let keys = (cert(&[(px, 1), (py, 2)]), cert(&[(py, 1), (px, 2)]));
                let swap = setwise.len() > pointwise.len();
                if swap != (keys.0 == keys.1) {
                    return Err(Error::invariant("pair symmetry disagrees with the structural code"));
                }
                (pointwise, swap.then_some(setwise), keys)
            }
        };
        let extend = |perms: Vec<Permutation>| -> Result<GroupPrep> {
            let mut ext = Vec::with_capacity(perms.len());
            for p in &perms {
                let mut img: Vec<u32> = p.images().to_vec();
                img.resize(n_h + 2 * tokens.len(), 0);
                for (j, &(a, b)) in token_pos.iter().enumerate() {
                    let (pa, pb) = (p.apply(a), p.apply(b));
                    let flip = pa > pb;
                    let target = *token_of
                        .get(&(pa.min(pb), pa.max(pb)))
                        .ok_or_else(|| Error::invariant("automorphism moves a pair child off its pairs"))?;
                    let t = (n_h + 2 * target) as u32;
                    img[n_h + 2 * j] = t + flip as u32;
                    img[n_h + 2 * j + 1] = t + !flip as u32;
                }
                ext.push(Permutation::from_images(img));
            }
            let group = PermGroup::new(ext)?;
            let profile = classify_group(&group);
            let engine = select_engine(&profile, self.opts.caps);
            Ok(GroupPrep { group, profile, engine })
        };
        let fix = extend(fix_perms)?;
        let edge = edge_perms.map(extend).transpose()?;
        let mut children_aut = BigUint::one();
        for c in vertex_child.iter().flatten().chain(&tokens) {
            children_aut *= &self.info(*c).aut_fix;
        }
        let aut_fix = &children_aut * fix.group.order();
        let aut_edge = edge.as_ref().map_or_else(|| aut_fix.clone(), |e| &children_aut * e.group.order());
        debug!(
            "node {v}: {:?} component on {n_h} vertices, group order {} ({:?}, {:?})",
            node.component().map(|c| c.kind),
            fix.group.order(),
            fix.profile.case,
            fix.engine
        );
        let prep = Prep::T(Box::new(TPrep { star, vertex_child, tokens, fix, edge }));
        Ok(Pending { prep, keys, aut_fix, aut_edge })
    }
}

/// Counting data for any graph: connected components grouped by isomorphism.
pub struct Analysis {
    parts: Vec<(TreeAnalysis, usize)>,
    n: usize,
}

impl Analysis {
    pub fn new(g: &Graph) -> Result<Self> {
        Self::with_options(g, AnalysisOptions::default())
    }

    pub fn with_options(g: &Graph, opts: AnalysisOptions) -> Result<Self> {
        if g.n() == 0 {
            return Err(Error::InvalidInput("empty graph".into()));
        }
        // the decomposition tree and its root are canonical, so the root code identifies a
        // component up to isomorphism once every tree shares one interner
        let mut interner = Interner::default();
        let mut classes: Vec<((u64, u64), TreeAnalysis, usize)> = Vec::new();
        for comp in connected_components(g) {
            let tree = build_decomposition_tree_with(&comp.graph, opts.triconnect)?;
            let t = TreeAnalysis::from_tree_shared(tree, opts, &mut interner)?;
            let (a, b) = t.node_code(t.tree.root);
            let code = (a.min(b), a.max(b));
            match classes.iter_mut().find(|c| c.0 == code) {
                Some(c) => c.2 += 1,
                None => classes.push((code, t, 1)),
            }
        }
        let parts = classes.into_iter().map(|(_, t, m)| (t, m)).collect();
        Ok(Analysis { parts, n: g.n() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_connected(&self) -> bool {
        self.parts.len() == 1 && self.parts[0].1 == 1
    }

    /// Distinct components with their multiplicities.
    pub fn parts(&self) -> &[(TreeAnalysis, usize)] {
        &self.parts
    }

    pub fn aut_order(&self) -> BigUint {
        self.parts.iter().map(|(t, m)| Pow::pow(&t.aut_order(), *m) * factorial(*m)).product()
    }

    /// `D(G,k)` as the product over isomorphism classes of `C(D(G_i,k), m_i)`.
    pub fn count(&self, k: u64) -> Result<DistResult> {
        let aut = self.aut_order();
        let mut d = BigUint::one();
        for (t, m) in &self.parts {
            d *= binom(&t.count(k)?.d, *m);
        }
        Ok(DistResult { k, l: &d * &aut, d, aut })
    }

    /// Least `k` with `D(G,k) > 0`.
    pub fn distinguishing_number(&self) -> Result<u64> {
        let mut best = 1;
        for (t, m) in &self.parts {
            let enough = |k: u64| -> Result<bool> { Ok(t.count(k)?.d >= BigUint::from(*m)) };
            let mut hi = 1;
            while !enough(hi)? {
                hi *= 2;
            }
            let mut lo = hi / 2;
            // invariant: lo fails (or is 0), hi succeeds
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if enough(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            best = best.max(hi);
        }
        Ok(best)
    }

    /// `D(G,k)` as a polynomial in `k`, interpolated from `k = 0..=n`. Connected graphs only.
    pub fn polynomial(&self) -> Result<DPolynomial> {
        if !self.is_connected() {
            return Err(Error::InvalidInput("the distinguishing polynomial needs a connected graph".into()));
        }
        let values = (0..=self.n as u64).map(|k| Ok(self.count(k)?.d)).collect::<Result<Vec<_>>>()?;
        Ok(DPolynomial::interpolate(&values))
    }
}

/// `D(G,k)`, `L(G,k)` and `|Aut(G)|` for a connected graph.
pub fn find_dist(g: &Graph, k: u64) -> Result<DistResult> {
    TreeAnalysis::new(g)?.count(k)
}

/// `D(G,k)` for any graph, componentwise.
pub fn count_disconnected(g: &Graph, k: u64) -> Result<DistResult> {
    Analysis::new(g)?.count(k)
}

pub fn distinguishing_number(g: &Graph) -> Result<u64> {
    Analysis::new(g)?.distinguishing_number()
}

pub fn distinguishing_polynomial(g: &Graph) -> Result<DPolynomial> {
    Analysis::new(g)?.polynomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(&big(5), 2), big(10));
        assert_eq!(binom(&big(2), 3), big(0));
        assert_eq!(binom(&big(0), 0), big(1));
        assert_eq!(binom(&big(7), 7), big(1));
    }

    #[test]
    fn c5_values() {
        let r = find_dist(&cycle(5), 3).unwrap();
        assert_eq!((r.l, r.d, r.aut), (big(120), big(12), big(10)));
        assert_eq!(find_dist(&cycle(5), 2).unwrap().d, big(0));
        assert_eq!(find_dist(&cycle(5), 1).unwrap().d, big(0));
        assert_eq!(distinguishing_number(&cycle(5)).unwrap(), 3);
        assert_eq!(distinguishing_number(&cycle(6)).unwrap(), 2);
    }

    #[test]
    fn small_graphs() {
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(find_dist(&k2, 2).unwrap().d, big(1));
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_dist(&p3, 2).unwrap().d, big(2));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(find_dist(&star, 3).unwrap().d, big(3));
        let single = Graph::new(1);
        assert_eq!(find_dist(&single, 4).unwrap().d, big(4));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(distinguishing_number(&k4).unwrap(), 4);
    }

    #[test]
    fn disconnected_copies() {
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(count_disconnected(&two, 2).unwrap().d, big(0));
        assert_eq!(distinguishing_number(&two).unwrap(), 3);
        let three = Graph::from_edges(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(count_disconnected(&three, 3).unwrap().d, big(1));
    }

    #[test]
    fn components_grouped_by_isomorphism() {
        use crate::families::{connected_graphs_up_to, shuffled};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let graphs = connected_graphs_up_to(5);
        for (i, a) in graphs.iter().enumerate() {
            let copy = a.disjoint_union(&shuffled(a, &mut rng));
            let parts = Analysis::new(&copy).unwrap().parts().iter().map(|p| p.1).collect::<Vec<_>>();
            assert_eq!(parts, [2]);
            for b in graphs.iter().skip(i + 1).step_by(5) {
                let pair = Analysis::new(&shuffled(&a.disjoint_union(b), &mut rng)).unwrap();
                assert_eq!(pair.parts().len(), 2);
            }
        }
    }

    #[test]
    fn polynomial_of_c5() {
        let p = distinguishing_polynomial(&cycle(5)).unwrap();
        assert_eq!(p.to_strings(), ["0", "2/5", "0", "-1/2", "0", "1/10"]);
    }
}
