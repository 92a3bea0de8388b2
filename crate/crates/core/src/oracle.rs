//! Brute-force ground truth computed directly from the definitions: automorphisms by
//! backtracking over bijections, counts by enumerating every labeling. Shares nothing with
//! the counting pipeline beyond the graph type.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

pub const ORACLE_MAX_N: usize = 10;
pub const ORACLE_MAX_LABELINGS: u64 = 10_000_000;

/// Structure the automorphisms must keep fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    Plain,
    Vertex(usize),
    /// Both ends fixed; the setwise stabilizer is reported alongside.
    Pair(usize, usize),
}

/// Counts relative to a fixed pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCounts {
    /// Order of the setwise stabilizer of the pair.
    pub aut_edge: usize,
    /// Classes under the setwise stabilizer.
    pub edge: BigUint,
    /// Pointwise classes preserved by some automorphism swapping the pair.
    pub bad: BigUint,
    /// Setwise classes whose ends share a label, and those whose ends differ.
    pub same: BigUint,
    pub diff: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub aut_order: usize,
    pub l: BigUint,
    pub d: BigUint,
    pub pair: Option<PairCounts>,
}

fn check_n(g: &Graph) -> Result<()> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::CapExceeded { what: "oracle vertex count", cap: ORACLE_MAX_N });
    }
    Ok(())
}

/// All automorphisms fixing each vertex of `pins`, identity first.
pub fn oracle_automorphisms(g: &Graph, pins: &[usize]) -> Result<Vec<Permutation>> {
    check_n(g)?;
    let n = g.n();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    extend(g, pins, 0, &mut img, &mut used, &mut out);
    out.sort();
    Ok(out)
}

fn extend(g: &Graph, pins: &[usize], v: usize, img: &mut [usize], used: &mut [bool], out: &mut Vec<Permutation>) {
    let n = g.n();
    if v == n {
        out.push(Permutation::from_usize(img));
        return;
    }
    for w in 0..n {
        if used[w] || g.degree(w) != g.degree(v) || (pins.contains(&v) && w != v) || (pins.contains(&w) && w != v) {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(img[u], w)) {
            continue;
        }
        img[v] = w;
        used[w] = true;
        extend(g, pins, v + 1, img, used, out);
        used[w] = false;
        img[v] = usize::MAX;
    }
}

fn labeling_count(n: usize, k: u64) -> Result<u64> {
    let cap = ORACLE_MAX_LABELINGS;
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total
            .checked_mul(k)
            .filter(|&t| t <= cap)
            .ok_or(Error::CapExceeded { what: "oracle labeling count", cap: cap as usize })?;
    }
    Ok(total)
}

fn decode(mut idx: u64, n: usize, k: u64, out: &mut [u32]) {
    for slot in out.iter_mut().take(n) {
        *slot = (idx % k) as u32;
        idx /= k;
    }
}

fn preserves(p: &Permutation, lab: &[u32]) -> bool {
    (0..lab.len()).all(|v| lab[p.apply(v)] == lab[v])
}

#[derive(Default, Clone, Copy)]
struct Tally {
    fix: u64,
    bad: u64,
    same: u64,
    diff: u64,
}

impl std::ops::Add for Tally {
    type Output = Tally;
    fn add(self, o: Tally) -> Tally {
        Tally { fix: self.fix + o.fix, bad: self.bad + o.bad, same: self.same + o.same, diff: self.diff + o.diff }
    }
}

/// Enumerates all `k^n` labelings and counts those no non-identity automorphism of the
/// context preserves.
pub fn oracle_counts(g: &Graph, k: u64, ctx: Context) -> Result<OracleResult> {
    check_n(g)?;
    let n = g.n();
    let (fixed, swaps) = match ctx {
        Context::Plain => (oracle_automorphisms(g, &[])?, Vec::new()),
        Context::Vertex(a) => (oracle_automorphisms(g, &[a])?, Vec::new()),
        Context::Pair(x, y) => {
            let all = oracle_automorphisms(g, &[])?;
            let setwise: Vec<Permutation> = all
                .into_iter()
                .filter(|p| (p.apply(x) == x && p.apply(y) == y) || (p.apply(x) == y && p.apply(y) == x))
                .collect();
            let (fixed, swaps): (Vec<_>, Vec<_>) = setwise.into_iter().partition(|p| p.apply(x) == x);
            (fixed, swaps)
        }
    };
    let aut = fixed.len();
    if k == 0 {
        let zero = BigUint::from(0u32);
        let pair = matches!(ctx, Context::Pair(..)).then(|| PairCounts {
            aut_edge: aut + swaps.len(),
            edge: zero.clone(),
            bad: zero.clone(),
            same: zero.clone(),
            diff: zero.clone(),
        });
        return Ok(OracleResult { aut_order: aut, l: zero.clone(), d: zero, pair });
    }
    let total = labeling_count(n, k)?;
    let ends = match ctx {
        Context::Pair(x, y) => Some((x, y)),
        _ => None,
    };
    let tally = (0..total)
        .into_par_iter()
        .fold(
            || (Tally::default(), vec![0u32; n]),
            |(mut t, mut lab), idx| {
                decode(idx, n, k, &mut lab);
                if fixed[1..].iter().any(|p| preserves(p, &lab)) {
                    return (t, lab);
                }
                t.fix += 1;
                if swaps.iter().any(|p| preserves(p, &lab)) {
                    t.bad += 1;
                } else if let Some((x, y)) = ends {
                    if lab[x] == lab[y] {
                        t.same += 1;
                    } else {
                        t.diff += 1;
                    }
                }
                (t, lab)
            },
        )
        .map(|(t, _)| t)
        .reduce(Tally::default, |a, b| a + b);
    let per = |count: u64, order: usize| -> Result<BigUint> {
        if !count.is_multiple_of(order as u64) {
            return Err(Error::invariant("orbit sizes do not divide the labeling count"));
        }
        Ok(BigUint::from(count / order as u64))
    };
    let pair = match ends {
        Some(_) => {
            let aut_edge = aut + swaps.len();
            Some(PairCounts {
                aut_edge,
                edge: per(tally.same + tally.diff, aut_edge)?,
                bad: per(tally.bad, aut)?,
                same: per(tally.same, aut_edge)?,
                diff: per(tally.diff, aut_edge)?,
            })
        }
        None => None,
    };
    Ok(OracleResult { aut_order: aut, l: BigUint::from(tally.fix), d: per(tally.fix, aut)?, pair })
}

/// `D(G,k)` by a second route: count distinguishing labelings that are the
/// lexicographically smallest member of their orbit.
pub fn oracle_orbit_count(g: &Graph, k: u64) -> Result<BigUint> {
    let auts = oracle_automorphisms(g, &[])?;
    let n = g.n();
    if k == 0 {
        return Ok(BigUint::from(0u32));
    }
    let total = labeling_count(n, k)?;
    let count: u64 = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], vec![0u32; n]),
            |(lab, image), idx| {
                decode(idx, n, k, lab);
                for p in &auts[1..] {
                    for v in 0..n {
                        image[p.apply(v)] = lab[v];
                    }
                    // compare most significant position first, matching the decode order
                    match image.iter().rev().cmp(lab.iter().rev()) {
                        std::cmp::Ordering::Equal => return 0,
                        std::cmp::Ordering::Less => return 0,
                        std::cmp::Ordering::Greater => {}
                    }
                }
                1
            },
        )
        .sum();
    Ok(BigUint::from(count))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(oracle_automorphisms(&cycle(5), &[]).unwrap().len(), 10);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(oracle_automorphisms(&k4, &[]).unwrap().len(), 24);
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let auts = oracle_automorphisms(&p3, &[]).unwrap();
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
        assert_eq!(oracle_automorphisms(&p3, &[0]).unwrap().len(), 1);
    }

    #[test]
    fn plain_counts() {
        let r = oracle_counts(&cycle(5), 3, Context::Plain).unwrap();
        assert_eq!((r.l, r.d, r.aut_order), (BigUint::from(120u32), BigUint::from(12u32), 10));
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let r = oracle_counts(&k2, 2, Context::Plain).unwrap();
        assert_eq!((r.l, r.d), (BigUint::from(2u32), BigUint::from(1u32)));
        assert_eq!(oracle_orbit_count(&cycle(5), 3).unwrap(), BigUint::from(12u32));
    }

    #[test]
    fn pair_counts_add_up() {
        // diamond: triangles 0-1-2 and 0-1-3 sharing edge 0-1
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)]).unwrap();
        for k in 1..=3u64 {
            let r = oracle_counts(&g, k, Context::Pair(0, 1)).unwrap();
            let p = r.pair.unwrap();
            assert_eq!(p.aut_edge, 4);
            assert_eq!(r.d, &p.edge * 2u32 + &p.bad);
            assert_eq!(p.edge, &p.same + &p.diff);
        }
    }

    #[test]
    fn caps() {
        assert!(matches!(oracle_automorphisms(&cycle(11), &[]), Err(Error::CapExceeded { .. })));
        assert!(matches!(oracle_counts(&cycle(10), 6, Context::Plain), Err(Error::CapExceeded { .. })));
    }
}
