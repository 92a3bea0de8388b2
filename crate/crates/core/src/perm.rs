use std::fmt;

use serde::{Deserialize, Serialize};

/// Permutation of `0..n` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    /// Panics if `images` is not a bijection on `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Self {
        let p = Permutation { images };
        assert!(p.is_bijection(), "not a permutation");
        p
    }

    pub fn from_usize(images: &[usize]) -> Self {
        Self::from_images(images.iter().map(|&x| x as u32).collect())
    }

    fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &x in &self.images {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return false,
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.apply(s) == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// `self^e` computed cycle by cycle.
    pub fn pow(&self, e: u64) -> Permutation {
        let mut images = self.images.clone();
        for cyc in self.cycles() {
            let len = cyc.len() as u64;
            let shift = (e % len) as usize;
            for (i, &x) in cyc.iter().enumerate() {
                images[x] = cyc[(i + shift) % cyc.len()] as u32;
            }
        }
        Permutation { images }
    }

    /// Cycle notation such as `(0 1 2)(3 4)`, or `()` for the identity.
    pub fn cycle_notation(&self, name: impl Fn(usize) -> String) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles.iter().map(|c| format!("({})", c.iter().map(|&x| name(x)).collect::<Vec<_>>().join(" "))).collect()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_notation(|x| x.to_string()))
    }
}
