//! Counting states with trivial stabilizer under an explicitly listed group.
//!
//! Every engine evaluates the same quantity, `Σ_S μ(1,S)·Fix(S)` over subgroups `S`, where
//! `Fix(S)` depends only on the orbit partition of `S` and is supplied by an [`OrbitWeight`].

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{
    classify_group, closed_lattice, subgroup_lattice, GroupProfile, PermGroup, CLOSED_LATTICE_CAP, DEFAULT_LATTICE_CAP,
    FULL_PIE_CAP,
};

/// Number of states fixed by every element of a subgroup, as a function of its orbits.
pub trait OrbitWeight: Sync {
    /// Size of the domain the group acts on.
    fn domain(&self) -> usize;
    /// `roots[i]` is the smallest point in the orbit of `i`.
    fn weight(&self, roots: &[u32]) -> BigUint;
}

/// `k^(number of orbits)`: plain vertex labelings.
#[derive(Clone, Debug)]
pub struct PlainWeight {
    n: usize,
    k: BigUint,
}

impl PlainWeight {
    pub fn new(n: usize, k: u64) -> Self {
        PlainWeight { n, k: BigUint::from(k) }
    }
}

impl OrbitWeight for PlainWeight {
    fn domain(&self) -> usize {
        self.n
    }

    fn weight(&self, roots: &[u32]) -> BigUint {
        let orbits = roots.iter().enumerate().filter(|&(i, &r)| r as usize == i).count();
        Pow::pow(&self.k, orbits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Inclusion-exclusion over all subsets of non-identity elements.
    FullPie,
    /// Inclusion-exclusion over the hitting set of a cyclic, dihedral or product group.
    Structured,
    /// Möbius inversion over the subgroup lattice.
    Mobius,
    /// Möbius inversion over the poset of orbit partitions.
    Closed,
}

/// Caps that decide which engine handles a group.
#[derive(Clone, Copy, Debug)]
pub struct EngineCaps {
    pub full_pie: usize,
    pub lattice: usize,
    pub closed: usize,
}

impl Default for EngineCaps {
    fn default() -> Self {
        EngineCaps { full_pie: FULL_PIE_CAP, lattice: DEFAULT_LATTICE_CAP, closed: CLOSED_LATTICE_CAP }
    }
}

fn to_unsigned(x: BigInt) -> Result<BigUint> {
    match x.sign() {
        Sign::Minus => Err(Error::invariant("inclusion-exclusion produced a negative count")),
        _ => Ok(x.magnitude().clone()),
    }
}

fn signed(w: BigUint, negative: bool) -> BigInt {
    BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, w)
}

fn check_domain(g: &PermGroup, w: &dyn OrbitWeight) -> Result<()> {
    if g.degree() != w.domain() {
        return Err(Error::invariant(format!("group acts on {} points, weight on {}", g.degree(), w.domain())));
    }
    Ok(())
}

/// Inclusion-exclusion over every subset of the non-identity elements.
pub fn count_full_pie(g: &PermGroup, w: &dyn OrbitWeight, cap: usize) -> Result<BigUint> {
    check_domain(g, w)?;
    if g.order() > cap {
        return Err(Error::CapExceeded { what: "group order for full inclusion-exclusion", cap });
    }
    let others: Vec<usize> = (1..g.order()).collect();
    let mut memo: HashMap<Vec<u32>, BigUint> = HashMap::new();
    let mut total = BigInt::zero();
    let mut gens = Vec::with_capacity(others.len());
    for mask in 0u64..1 << others.len() {
        gens.clear();
        gens.extend(others.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        let roots = g.orbit_roots(&gens);
        let fixed = memo.entry(roots).or_insert_with_key(|r| w.weight(r)).clone();
        total += signed(fixed, mask.count_ones() % 2 == 1);
    }
    to_unsigned(total)
}

fn subset_sum(g: &PermGroup, w: &dyn OrbitWeight, pstar: &[usize], extra: Option<usize>) -> BigInt {
    let mut total = BigInt::zero();
    let mut gens = Vec::with_capacity(pstar.len() + 1);
    for mask in 0u64..1 << pstar.len() {
        gens.clear();
        gens.extend(extra);
        gens.extend(pstar.iter().enumerate().filter(|&(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
        total += signed(w.weight(&g.orbit_roots(&gens)), mask.count_ones() % 2 == 1);
    }
    total
}

/// Inclusion-exclusion over the hitting set `P*`, minus the terms of stabilizers of order
/// two generated by a reflection.
pub fn count_structured(g: &PermGroup, profile: &GroupProfile, w: &dyn OrbitWeight) -> Result<BigUint> {
    check_domain(g, w)?;
    if !profile.case.is_structured() {
        return Err(Error::InvalidInput(format!("{:?} has no structured formula", profile.case)));
    }
    let core = subset_sum(g, w, &profile.pstar, None);
    let reflected: BigInt = profile
        .reflections
        .par_iter()
        .map(|&tau| subset_sum(g, w, &profile.pstar, Some(tau)))
        .reduce(BigInt::zero, |a, b| a + b);
    to_unsigned(core - reflected)
}

/// Möbius inversion over the full subgroup lattice.
pub fn count_mobius(g: &PermGroup, w: &dyn OrbitWeight, cap: usize) -> Result<BigUint> {
    check_domain(g, w)?;
    let lattice = subgroup_lattice(g, cap)?;
    let total: BigInt = lattice
        .subgroups
        .par_iter()
        .zip(&lattice.mu)
        .filter(|(_, &mu)| mu != 0)
        .map(|(s, &mu)| BigInt::from(mu) * BigInt::from(w.weight(&g.orbit_roots(&s.generators))))
        .reduce(BigInt::zero, |a, b| a + b);
    to_unsigned(total)
}

/// Möbius inversion over orbit partitions of subgroups.
pub fn count_closed(g: &PermGroup, w: &dyn OrbitWeight, cap: usize) -> Result<BigUint> {
    check_domain(g, w)?;
    let lattice = closed_lattice(g, cap)?;
    let total: BigInt = lattice
        .partitions
        .par_iter()
        .zip(&lattice.mu)
        .filter(|(_, &mu)| mu != 0)
        .map(|(p, &mu)| BigInt::from(mu) * BigInt::from(w.weight(p)))
        .reduce(BigInt::zero, |a, b| a + b);
    to_unsigned(total)
}

/// The engine the dispatcher picks for `profile`.
pub fn select_engine(profile: &GroupProfile, caps: EngineCaps) -> Engine {
    match profile.case {
        c if c.is_structured() => Engine::Structured,
        _ if profile.order <= caps.full_pie => Engine::FullPie,
        _ if profile.order <= caps.lattice => Engine::Mobius,
        _ => Engine::Closed,
    }
}

pub fn run_engine(
    engine: Engine,
    g: &PermGroup,
    profile: &GroupProfile,
    w: &dyn OrbitWeight,
    caps: EngineCaps,
) -> Result<BigUint> {
    if g.order() == 1 {
        check_domain(g, w)?;
        return Ok(w.weight(&(0..w.domain() as u32).collect::<Vec<_>>()));
    }
    match engine {
        Engine::FullPie => count_full_pie(g, w, caps.full_pie),
        Engine::Structured => count_structured(g, profile, w),
        Engine::Mobius => count_mobius(g, w, caps.lattice),
        Engine::Closed => count_closed(g, w, caps.closed),
    }
}

/// Engines that can handle `profile` within `caps`, cheapest first.
pub fn applicable_engines(profile: &GroupProfile, caps: EngineCaps) -> Vec<Engine> {
    let mut out = Vec::new();
    if profile.case.is_structured() {
        out.push(Engine::Structured);
    }
    if profile.order <= caps.full_pie {
        out.push(Engine::FullPie);
    }
    if profile.order <= caps.lattice {
        out.push(Engine::Mobius);
        out.push(Engine::Closed);
    }
    out
}

/// Number of states with trivial stabilizer, using the dispatched engine.
pub fn count_trivial_stabilizer(g: &PermGroup, w: &dyn OrbitWeight) -> Result<BigUint> {
    let profile = classify_group(g);
    let caps = EngineCaps::default();
    run_engine(select_engine(&profile, caps), g, &profile, w, caps)
}

/// `L(G,k)` for a whole group of vertex permutations: labelings no non-identity element
/// preserves.
pub fn count_plain(g: &PermGroup, k: u64) -> Result<BigUint> {
    count_trivial_stabilizer(g, &PlainWeight::new(g.degree(), k))
}
