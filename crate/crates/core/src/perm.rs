//! Permutations of `{0..n-1}` with exact arithmetic.
//!
//! Points are acted on from the right: `p.apply(x)` is the image of `x`
//! under `p`, and `a.product(&b)` applies `a` first, then `b`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};

/// A permutation stored as its image table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl core::fmt::Debug for Perm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from its image table.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if (im as usize) >= n || seen[im as usize] {
                return Err(Error::InvalidSpec("image table is not a bijection".into()));
            }
            seen[im as usize] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `{0..degree-1}` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Perm> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let from = cycle[window];
                let to = cycle[(window + 1) % cycle.len()];
                if from as usize >= degree || to as usize >= degree {
                    return Err(Error::InvalidSpec("cycle letter out of range".into()));
                }
                if touched[from as usize] {
                    return Err(Error::InvalidSpec("cycles are not disjoint".into()));
                }
                touched[from as usize] = true;
                images[from as usize] = to;
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// `self` followed by `other`.
    pub fn product(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&im| other.images[im as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Perm { images }
    }

    /// `by^-1 * self * by`.
    pub fn conjugate(&self, by: &Perm) -> Perm {
        by.inverse().product(self).product(by)
    }

    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .product(&other.inverse())
            .product(self)
            .product(other)
    }

    /// Non-trivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut cycle = vec![start as u32];
            let mut p = self.images[start] as usize;
            while p != start {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// Exact element order (lcm of cycle lengths).
    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for cycle in self.cycles() {
            order = order.lcm(&BigUint::from(cycle.len()));
        }
        order
    }

    /// Smallest point moved by the permutation, if any.
    pub fn min_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &im)| *i as u32 != im)
            .map(|(i, _)| i as u32)
    }

    pub fn pow(&self, e: u64) -> Perm {
        let mut acc = Perm::identity(self.degree());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            base = base.product(&base);
            e >>= 1;
        }
        acc
    }
}

/// Breadth-first enumeration of the group generated by `gens`.
///
/// Independent of the stabilizer-chain machinery; serves as the brute-force
/// order oracle. Returns `None` once more than `cap` elements are found.
pub fn enumerate_elements(gens: &[Perm], degree: usize, cap: usize) -> Option<Vec<Perm>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    let id = Perm::identity(degree);
    seen.insert(id.clone());
    out.push(id.clone());
    queue.push_back(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.product(s);
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return None;
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Some(out)
}

/// Single orbit of `point` under all `gens`, in BFS discovery order.
pub fn orbit(gens: &[Perm], point: u32) -> Vec<u32> {
    let degree = gens.first().map_or(point as usize + 1, Perm::degree);
    let mut in_orbit = vec![false; degree];
    let mut out = vec![point];
    in_orbit[point as usize] = true;
    let mut i = 0;
    while i < out.len() {
        let p = out[i];
        for g in gens {
            let q = g.apply(p);
            if !in_orbit[q as usize] {
                in_orbit[q as usize] = true;
                out.push(q);
            }
        }
        i += 1;
    }
    out
}
