//! Explicitly listed permutation groups: validation, structural classification, generating
//! sets for inclusion-exclusion, and subgroup lattices with their Möbius functions.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::util::UnionFind;

/// Default cap on the order of a group whose full subgroup lattice is enumerated.
pub const DEFAULT_LATTICE_CAP: usize = 360;
/// Cap on the number of orbit partitions in a closed-subgroup lattice.
pub const CLOSED_LATTICE_CAP: usize = 5000;
/// Largest group order handled by full-subset inclusion-exclusion.
pub const FULL_PIE_CAP: usize = 16;

/// A finite permutation group given by the full list of its elements.
///
/// Elements are identified by their images on a base, a set of points on which no two
/// distinct elements agree, so products cost `O(|base|)`.
#[derive(Clone, Debug)]
pub struct PermGroup {
    elements: Vec<Permutation>,
    orders: Vec<u64>,
    base: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
    generators: Vec<usize>,
}

impl PermGroup {
    /// Validates that `elements` (identity first, pairwise distinct, equal degree) is closed
    /// under composition.
    pub fn new(elements: Vec<Permutation>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidInput("empty element list".into()));
        };
        if !first.is_identity() {
            return Err(Error::InvalidInput("identity must come first".into()));
        }
        let degree = first.len();
        if elements.iter().any(|p| p.len() != degree) {
            return Err(Error::InvalidInput("elements act on different domains".into()));
        }
        let base = find_base(&elements)?;
        let mut index = HashMap::with_capacity(elements.len());
        for (i, p) in elements.iter().enumerate() {
            index.insert(base.iter().map(|&b| p.images()[b]).collect::<Vec<u32>>(), i);
        }
        let orders = elements.iter().map(Permutation::order).collect();
        let mut g = PermGroup { elements, orders, base, index, generators: Vec::new() };
        g.generators = g.validate_closure()?;
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    /// Element orders, aligned with [`elements`](Self::elements).
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// A generating set chosen greedily in element order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Index of `p` if it belongs to the group.
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        let key: Vec<u32> = self.base.iter().map(|&b| p.images()[b]).collect();
        self.index.get(&key).copied().filter(|&i| self.elements[i] == *p)
    }

    /// Index of `a ∘ b` (apply `b` first).
    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.elements[a], &self.elements[b]);
        let key: Vec<u32> = self.base.iter().map(|&x| pa.images()[pb.apply(x)]).collect();
        self.index[&key]
    }

    pub fn pow(&self, a: usize, e: u64) -> usize {
        let mut acc = 0;
        for _ in 0..e % self.orders[a] {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Indices of `⟨a⟩` in power order, starting with the identity.
    pub fn cyclic(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = a;
        while x != 0 {
            out.push(x);
            x = self.mul(x, a);
        }
        out
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_central(&self, a: usize) -> bool {
        self.generators.iter().all(|&g| self.commute(a, g))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generators;
        gens.iter().enumerate().all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Subgroup generated by `gens`, as sorted element indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        self.closure_from(&[0], gens)
    }

    /// Closure of `start ∪ gens` under right multiplication by `gens`; `start` must contain
    /// the identity and be a subgroup or the identity alone.
    fn closure_from(&self, start: &[usize], gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        let mut out: Vec<usize> = start.to_vec();
        for &s in start {
            member[s] = true;
        }
        let mut head = 0;
        while head < out.len() {
            let h = out[head];
            head += 1;
            for &g in gens {
                let x = self.mul(h, g);
                if !member[x] {
                    member[x] = true;
                    out.push(x);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn validate_closure(&self) -> Result<Vec<usize>> {
        let n = self.order();
        let mut member = vec![false; n];
        member[0] = true;
        let mut span = vec![0usize];
        let mut gens = Vec::new();
        for cand in 1..n {
            if member[cand] {
                continue;
            }
            gens.push(cand);
            let mut head = 0;
            while head < span.len() {
                let h = span[head];
                head += 1;
                for &g in &gens {
                    let prod = self.elements[h].compose(&self.elements[g]);
                    let x = self
                        .index_of(&prod)
                        .ok_or_else(|| Error::invariant("element list is not closed under composition"))?;
                    if !member[x] {
                        member[x] = true;
                        span.push(x);
                    }
                }
            }
            if span.len() == n {
                break;
            }
        }
        Ok(gens)
    }

    /// Orbit roots (smallest point of each orbit) of the subgroup generated by `gens`.
    pub fn orbit_roots(&self, gens: &[usize]) -> Vec<u32> {
        orbit_roots(gens.iter().map(|&g| &self.elements[g]), self.degree())
    }
}

fn find_base(elements: &[Permutation]) -> Result<Vec<usize>> {
    let mut base: Vec<usize> = Vec::new();
    loop {
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::with_capacity(elements.len());
        let mut clash = None;
        for (i, p) in elements.iter().enumerate() {
            let key: Vec<u32> = base.iter().map(|&b| p.images()[b]).collect();
            if let Some(&j) = seen.get(&key) {
                clash = Some((j, i));
                break;
            }
            seen.insert(key, i);
        }
        let Some((a, b)) = clash else { return Ok(base) };
        let point = (0..elements[a].len()).find(|&x| elements[a].apply(x) != elements[b].apply(x));
        match point {
            Some(x) => base.push(x),
            None => return Err(Error::InvalidInput("duplicate group element".into())),
        }
    }
}

/// Orbit roots of the group generated by `perms` on `0..n`.
pub fn orbit_roots<'a>(perms: impl IntoIterator<Item = &'a Permutation>, n: usize) -> Vec<u32> {
    let mut uf = UnionFind::new(n);
    for p in perms {
        for x in 0..n {
            uf.union(x, p.apply(x));
        }
    }
    uf.roots()
}

/// Number of orbits of the group generated by `perms` on `0..n`.
pub fn orbit_count<'a>(perms: impl IntoIterator<Item = &'a Permutation>, n: usize) -> usize {
    let roots = orbit_roots(perms, n);
    roots.iter().enumerate().filter(|&(i, &r)| r as usize == i).count()
}

pub fn element_orders(elements: &[Permutation]) -> Vec<u64> {
    elements.iter().map(Permutation::order).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupCase {
    FullPie,
    Cyclic(u64),
    CyclicXZ2(u64),
    Dihedral(u64),
    DihedralXZ2(u64),
    Lattice,
}

impl GroupCase {
    pub fn is_structured(self) -> bool {
        !matches!(self, GroupCase::FullPie | GroupCase::Lattice)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub order: usize,
    pub case: GroupCase,
    /// Element indices of the hitting set: prime-index powers of the rotation, plus the
    /// central involutions in the product cases.
    pub pstar: Vec<usize>,
    /// Involutions outside the cyclic (or cyclic-by-Z2) core, for the dihedral cases.
    pub reflections: Vec<usize>,
}

fn prime_factors(mut t: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= t {
        if t.is_multiple_of(p) {
            out.push(p);
            while t.is_multiple_of(p) {
                t /= p;
            }
        }
        p += 1;
    }
    if t > 1 {
        out.push(t);
    }
    out
}

fn prime_powers(g: &PermGroup, rho: usize, t: u64) -> Vec<usize> {
    prime_factors(t).into_iter().map(|p| g.pow(rho, t / p)).collect()
}

fn try_cyclic(g: &PermGroup) -> Option<GroupProfile> {
    let n = g.order() as u64;
    let rho = (0..g.order()).find(|&i| g.orders()[i] == n)?;
    Some(GroupProfile {
        order: g.order(),
        case: GroupCase::Cyclic(n),
        pstar: prime_powers(g, rho, n),
        reflections: vec![],
    })
}

fn try_dihedral(g: &PermGroup) -> Option<GroupProfile> {
    let n = g.order();
    if !n.is_multiple_of(2) {
        return None;
    }
    let t = (n / 2) as u64;
    for rho in 0..n {
        if g.orders()[rho] != t {
            continue;
        }
        let mut inside = vec![false; n];
        for x in g.cyclic(rho) {
            inside[x] = true;
        }
        if (0..n).all(|i| inside[i] || g.orders()[i] == 2) {
            let reflections = (0..n).filter(|&i| !inside[i]).collect();
            return Some(GroupProfile {
                order: n,
                case: GroupCase::Dihedral(t),
                pstar: prime_powers(g, rho, t),
                reflections,
            });
        }
    }
    None
}

/// Finds `ρ` of order `t` and a central involution `z ∉ ⟨ρ⟩`; returns `(core, pstar)` where
/// `core = ⟨ρ⟩ ∪ z⟨ρ⟩`.
fn cyclic_times_z2_core(g: &PermGroup, t: u64) -> Option<(Vec<bool>, Vec<usize>)> {
    if !t.is_multiple_of(2) {
        return None;
    }
    let n = g.order();
    let central_involutions: Vec<usize> = (1..n).filter(|&i| g.orders()[i] == 2 && g.is_central(i)).collect();
    for rho in 0..n {
        if g.orders()[rho] != t {
            continue;
        }
        let powers = g.cyclic(rho);
        let mut inside = vec![false; n];
        for &x in &powers {
            inside[x] = true;
        }
        let Some(&z) = central_involutions.iter().find(|&&z| !inside[z]) else { continue };
        let mut core = inside.clone();
        for &x in &powers {
            core[g.mul(z, x)] = true;
        }
        let mut pstar = prime_powers(g, rho, t);
        pstar.push(z);
        pstar.push(g.mul(g.pow(rho, t / 2), z));
        return Some((core, pstar));
    }
    None
}

fn try_cyclic_x_z2(g: &PermGroup) -> Option<GroupProfile> {
    let n = g.order();
    if !n.is_multiple_of(2) || !g.is_abelian() {
        return None;
    }
    let t = (n / 2) as u64;
    let (_, pstar) = cyclic_times_z2_core(g, t)?;
    Some(GroupProfile { order: n, case: GroupCase::CyclicXZ2(t), pstar, reflections: vec![] })
}

fn try_dihedral_x_z2(g: &PermGroup) -> Option<GroupProfile> {
    let n = g.order();
    if !n.is_multiple_of(4) {
        return None;
    }
    let t = (n / 4) as u64;
    let (core, pstar) = cyclic_times_z2_core(g, t)?;
    if !(0..n).all(|i| core[i] || g.orders()[i] == 2) {
        return None;
    }
    let reflections = (0..n).filter(|&i| !core[i]).collect();
    Some(GroupProfile { order: n, case: GroupCase::DihedralXZ2(t), pstar, reflections })
}

/// Classifies `g` for the counting engines.
///
/// The branch suggested by element orders and the involution count is tried first; if its
/// structural verification fails the other patterns are tried in the order cyclic, dihedral,
/// cyclic × Z2, dihedral × Z2. Groups matching none fall back to full inclusion-exclusion
/// when small and to Möbius inversion otherwise.
pub fn classify_group(g: &PermGroup) -> GroupProfile {
    let n = g.order();
    if n == 1 {
        return GroupProfile { order: 1, case: GroupCase::FullPie, pstar: vec![], reflections: vec![] };
    }
    let involutions = g.orders().iter().filter(|&&o| o == 2).count();
    type Try = fn(&PermGroup) -> Option<GroupProfile>;
    let first: Try = if g.orders().contains(&(n as u64)) {
        try_cyclic
    } else if involutions == 3 {
        try_cyclic_x_z2
    } else if n / 2 <= involutions && involutions <= n / 2 + 1 {
        try_dihedral
    } else {
        try_dihedral_x_z2
    };
    let order: [Try; 5] = [first, try_cyclic, try_dihedral, try_cyclic_x_z2, try_dihedral_x_z2];
    for f in order {
        if let Some(p) = f(g) {
            return p;
        }
    }
    let case = if n <= FULL_PIE_CAP { GroupCase::FullPie } else { GroupCase::Lattice };
    GroupProfile { order: n, case, pstar: vec![], reflections: vec![] }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    /// Sorted element indices.
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
    bits: Vec<u64>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn contains(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }
}

fn bitset(n: usize, elems: &[usize]) -> Vec<u64> {
    let mut bits = vec![0u64; n.div_ceil(64)];
    for &x in elems {
        bits[x / 64] |= 1 << (x % 64);
    }
    bits
}

/// All subgroups of a group with the Möbius function `μ(1, S)`.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    /// Sorted by order; the trivial group comes first and the whole group last.
    pub subgroups: Vec<Subgroup>,
    pub mu: Vec<i64>,
    /// Orbit counts on the group's domain.
    pub orbit_counts: Vec<usize>,
}

impl SubgroupLattice {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.subgroups[a].is_subgroup_of(&self.subgroups[b])
    }
}

pub fn subgroup_lattice(g: &PermGroup, cap: usize) -> Result<SubgroupLattice> {
    let n = g.order();
    if n > cap {
        return Err(Error::CapExceeded { what: "group order for subgroup lattice", cap });
    }
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut subgroups: Vec<Subgroup> = Vec::new();
    let mut push = |elements: Vec<usize>, generators: Vec<usize>, subgroups: &mut Vec<Subgroup>| {
        let bits = bitset(n, &elements);
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(bits.clone()) {
            e.insert(subgroups.len());
            subgroups.push(Subgroup { elements, generators, bits });
        }
    };
    push(vec![0], vec![], &mut subgroups);
    for a in 1..n {
        let mut c = g.cyclic(a);
        c.sort_unstable();
        push(c, vec![a], &mut subgroups);
    }
    let cyclic: Vec<usize> = (1..subgroups.len()).collect();
    let mut i = 0;
    while i < subgroups.len() {
        for &c in &cyclic {
            let gen = subgroups[c].generators[0];
            if subgroups[i].contains(gen) {
                continue;
            }
            let mut gens = subgroups[i].generators.clone();
            gens.push(gen);
            let joined = g.closure_from(&subgroups[i].elements, &gens);
            push(joined, gens, &mut subgroups);
        }
        i += 1;
    }
    subgroups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    let count = subgroups.len();
    let mut mu = vec![0i64; count];
    mu[0] = 1;
    for s in 1..count {
        let mut acc = 0;
        for t in 0..s {
            if subgroups[t].order() < subgroups[s].order() && subgroups[t].is_subgroup_of(&subgroups[s]) {
                acc += mu[t];
            }
        }
        mu[s] = -acc;
    }
    let orbit_counts =
        subgroups.iter().map(|s| orbit_count(s.generators.iter().map(|&x| g.element(x)), g.degree())).collect();
    Ok(SubgroupLattice { subgroups, mu, orbit_counts })
}

/// Orbit partitions of all subgroups, ordered by refinement, with `μ(discrete, π)`.
///
/// A labeling's stabilizer is always the full stabilizer of its own orbit partition, so
/// inversion over this poset counts labelings with trivial stabilizer.
#[derive(Clone, Debug)]
pub struct ClosedLattice {
    /// Orbit roots per point; the discrete partition comes first.
    pub partitions: Vec<Vec<u32>>,
    pub mu: Vec<i64>,
}

fn refines(a: &[u32], b: &[u32]) -> bool {
    // a ≤ b iff points sharing an a-block share a b-block
    a.iter().enumerate().all(|(i, &r)| b[i] == b[r as usize])
}

pub fn closed_lattice(g: &PermGroup, cap: usize) -> Result<ClosedLattice> {
    let d = g.degree();
    let mut atoms: Vec<Vec<u32>> = Vec::new();
    let mut atom_seen = std::collections::HashSet::new();
    for p in g.elements() {
        let r = orbit_roots([p], d);
        if atom_seen.insert(r.clone()) {
            atoms.push(r);
        }
    }
    let discrete: Vec<u32> = (0..d as u32).collect();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut partitions = vec![discrete.clone()];
    index.insert(discrete, 0);
    let mut i = 0;
    while i < partitions.len() {
        for a in &atoms {
            if refines(a, &partitions[i]) {
                continue;
            }
            let mut uf = UnionFind::new(d);
            for x in 0..d {
                uf.union(x, partitions[i][x] as usize);
                uf.union(x, a[x] as usize);
            }
            let joined = uf.roots();
            if !index.contains_key(&joined) {
                if partitions.len() >= cap {
                    return Err(Error::CapExceeded { what: "closed-subgroup lattice size", cap });
                }
                index.insert(joined.clone(), partitions.len());
                partitions.push(joined);
            }
        }
        i += 1;
    }
    let blocks = |p: &[u32]| p.iter().enumerate().filter(|&(i, &r)| r as usize == i).count();
    partitions.sort_by_key(|p| std::cmp::Reverse(blocks(p)));
    let count = partitions.len();
    let mut mu = vec![0i64; count];
    mu[0] = 1;
    for s in 1..count {
        let mut acc = 0;
        for t in 0..s {
            if mu[t] != 0 && partitions[t] != partitions[s] && refines(&partitions[t], &partitions[s]) {
                acc += mu[t];
            }
        }
        mu[s] = -acc;
    }
    Ok(ClosedLattice { partitions, mu })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(n: usize, s: usize) -> Permutation {
        Permutation::from_usize(&(0..n).map(|i| (i + s) % n).collect::<Vec<_>>())
    }

    fn reflection(n: usize, s: usize) -> Permutation {
        Permutation::from_usize(&(0..n).map(|i| (s + n - i) % n).collect::<Vec<_>>())
    }

    pub(crate) fn cyclic_group(n: usize) -> PermGroup {
        PermGroup::new((0..n).map(|s| rotation(n, s)).collect()).unwrap()
    }

    pub(crate) fn dihedral_group(n: usize) -> PermGroup {
        let mut e: Vec<_> = (0..n).map(|s| rotation(n, s)).collect();
        e.extend((0..n).map(|s| reflection(n, s)));
        PermGroup::new(e).unwrap()
    }

    fn symmetric_group(n: usize) -> PermGroup {
        fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Permutation>) {
            if prefix.len() == n {
                out.push(Permutation::from_usize(prefix));
                return;
            }
            for x in 0..n {
                if !prefix.contains(&x) {
                    prefix.push(x);
                    extend(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut all = Vec::new();
        extend(&mut Vec::new(), n, &mut all);
        PermGroup::new(all).unwrap()
    }

    #[test]
    fn orders_of_d5() {
        let g = dihedral_group(5);
        assert_eq!(g.orders()[0], 1);
        assert_eq!(g.orders()[1], 5);
        assert!(g.orders()[5..].iter().all(|&o| o == 2));
        assert_eq!(element_orders(g.elements()), g.orders());
    }

    #[test]
    fn rejects_non_closed_lists() {
        let e = vec![Permutation::identity(5), rotation(5, 1)];
        assert!(matches!(PermGroup::new(e), Err(Error::Invariant(_))));
        let e = vec![rotation(5, 1), Permutation::identity(5)];
        assert!(PermGroup::new(e).is_err());
    }

    #[test]
    fn classify_examples() {
        let d5 = classify_group(&dihedral_group(5));
        assert_eq!(d5.case, GroupCase::Dihedral(5));
        assert_eq!(d5.pstar.len(), 1);
        assert_eq!(d5.reflections.len(), 5);

        let g = cyclic_group(12);
        let c12 = classify_group(&g);
        assert_eq!(c12.case, GroupCase::Cyclic(12));
        // the chosen rotation may be any generator, so compare generated subgroups
        let got: Vec<Vec<usize>> = c12.pstar.iter().map(|&i| g.closure(&[i])).collect();
        assert_eq!(got.len(), 2);
        for shift in [6, 4] {
            assert!(got.contains(&g.closure(&[g.index_of(&rotation(12, shift)).unwrap()])));
        }

        let trivial = PermGroup::new(vec![Permutation::identity(3)]).unwrap();
        assert_eq!(classify_group(&trivial).case, GroupCase::FullPie);

        assert_eq!(classify_group(&symmetric_group(3)).case, GroupCase::Dihedral(3));
        assert_eq!(classify_group(&symmetric_group(4)).case, GroupCase::Lattice);
    }

    #[test]
    fn product_cases() {
        // Z4 x Z2 acting on 4 + 2 points
        let r = Permutation::from_usize(&[1, 2, 3, 0, 4, 5]);
        let z = Permutation::from_usize(&[0, 1, 2, 3, 5, 4]);
        let mut e = vec![Permutation::identity(6)];
        for i in 0..4u64 {
            for j in 0..2u64 {
                let p = r.pow(i).compose(&z.pow(j));
                if !p.is_identity() {
                    e.push(p);
                }
            }
        }
        let g = PermGroup::new(e).unwrap();
        let p = classify_group(&g);
        assert_eq!(p.case, GroupCase::CyclicXZ2(4));
        assert_eq!(p.pstar.len(), 3);

        // D4 x Z2 acting on a square plus a swapped pair
        let mut e = vec![Permutation::identity(6)];
        let d4 = dihedral_group(4);
        for q in d4.elements() {
            for j in 0..2u64 {
                let mut img: Vec<usize> = (0..4).map(|x| q.apply(x)).collect();
                img.extend(if j == 0 { [4, 5] } else { [5, 4] });
                let p = Permutation::from_usize(&img);
                if !p.is_identity() {
                    e.push(p);
                }
            }
        }
        let g = PermGroup::new(e).unwrap();
        let p = classify_group(&g);
        assert_eq!(p.case, GroupCase::DihedralXZ2(4));
        assert_eq!(p.reflections.len(), 8);
    }

    #[test]
    fn lattice_examples() {
        let z2 = cyclic_group(2);
        let l = subgroup_lattice(&z2, 360).unwrap();
        assert_eq!(l.subgroups.len(), 2);
        assert_eq!(l.mu, vec![1, -1]);

        let s3 = subgroup_lattice(&symmetric_group(3), 360).unwrap();
        assert_eq!(s3.subgroups.len(), 6);
        assert_eq!(s3.mu, vec![1, -1, -1, -1, -1, 3]);

        let d5 = subgroup_lattice(&dihedral_group(5), 360).unwrap();
        assert_eq!(d5.subgroups.len(), 8);

        assert!(matches!(subgroup_lattice(&symmetric_group(4), 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn mobius_recurrence_holds() {
        for g in [symmetric_group(4), dihedral_group(6), cyclic_group(12)] {
            let l = subgroup_lattice(&g, 360).unwrap();
            for t in 1..l.subgroups.len() {
                let s: i64 = (0..l.subgroups.len()).filter(|&s| l.leq(s, t)).map(|s| l.mu[s]).sum();
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn orbit_counts_on_c5() {
        assert_eq!(orbit_count([&Permutation::identity(5)], 5), 5);
        assert_eq!(orbit_count([&rotation(5, 1)], 5), 1);
        assert_eq!(orbit_count([&reflection(5, 0)], 5), 3);
    }

    #[test]
    fn cyclic_pstar_hits_every_subgroup() {
        for t in 2..=60 {
            let g = cyclic_group(t);
            let p = classify_group(&g);
            let l = subgroup_lattice(&g, 360).unwrap();
            for s in &l.subgroups[1..] {
                assert!(p.pstar.iter().any(|&x| s.contains(x)), "t={t}");
            }
        }
    }

    #[test]
    fn closed_lattice_of_s3() {
        let c = closed_lattice(&symmetric_group(3), 100).unwrap();
        // discrete, three pairs, whole set
        assert_eq!(c.partitions.len(), 5);
        assert_eq!(c.mu, vec![1, -1, -1, -1, 2]);
    }
}
