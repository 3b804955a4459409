//! Deterministic stabilizer chains for permutation groups.
//!
//! The construction is the classical deterministic one: base points are
//! the smallest points moved (a caller may force a base prefix), orbits
//! and transversals are kept explicitly, and every Schreier generator is
//! sifted exactly once through the levels below, bottom-up. No
//! randomization anywhere; identical inputs give identical chains.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use crate::perm::Perm;

#[derive(Clone)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    /// Orbit of `base` under `gens`, in discovery order.
    orbit: Vec<u32>,
    /// Coset representative per point: `base^rep = point`.
    transversal: Vec<Option<Perm>>,
    /// Schreier pairs (orbit point, generator index) not yet verified.
    pending: VecDeque<(u32, usize)>,
}

impl Level {
    fn new(degree: usize, base: u32) -> Level {
        let mut transversal = vec![None; degree];
        transversal[base as usize] = Some(Perm::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
            pending: VecDeque::new(),
        }
    }
}

enum Sift {
    Identity,
    /// The residue moves `levels[level].base` out of its current orbit.
    Stuck { residue: Perm, level: usize },
    /// The residue fixes every base point but is not the identity.
    FellOff { residue: Perm },
}

/// A stabilizer chain with explicit transversals.
#[derive(Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds the chain for the group generated by `gens`.
    ///
    /// `forced_base` points become the first base points, in the given
    /// order, whether or not anything moves them; the generators at level
    /// `forced_base.len()` then generate the pointwise stabilizer of the
    /// forced points.
    pub fn build(gens: &[Perm], degree: usize, forced_base: &[u32]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: forced_base.iter().map(|&b| Level::new(degree, b)).collect(),
        };
        for g in gens {
            chain.add_generator(g.clone());
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds a group generator, restoring the chain property.
    pub fn add_generator(&mut self, g: Perm) {
        if g.is_identity() {
            return;
        }
        let j = match (0..self.levels.len()).find(|&i| g.apply(self.levels[i].base) != self.levels[i].base)
        {
            Some(j) => j,
            None => {
                let base = g.min_moved_point().expect("non-identity moves a point");
                self.levels.push(Level::new(self.degree, base));
                self.levels.len() - 1
            }
        };
        for l in 0..=j {
            self.insert_gen_at(l, g.clone());
        }
        self.process_pending();
    }

    fn insert_gen_at(&mut self, l: usize, g: Perm) {
        if self.levels[l].gens.contains(&g) {
            return;
        }
        let gi = self.levels[l].gens.len();
        self.levels[l].gens.push(g);
        for i in 0..self.levels[l].orbit.len() {
            let p = self.levels[l].orbit[i];
            self.levels[l].pending.push_back((p, gi));
        }
        self.extend_orbit(l);
    }

    fn extend_orbit(&mut self, l: usize) {
        let level = &mut self.levels[l];
        let mut i = 0;
        while i < level.orbit.len() {
            let p = level.orbit[i];
            for gi in 0..level.gens.len() {
                let q = level.gens[gi].apply(p);
                if level.transversal[q as usize].is_none() {
                    let rep = level.transversal[p as usize]
                        .as_ref()
                        .expect("orbit points have representatives")
                        .product(&level.gens[gi]);
                    level.transversal[q as usize] = Some(rep);
                    level.orbit.push(q);
                    for gj in 0..level.gens.len() {
                        level.pending.push_back((q, gj));
                    }
                }
            }
            i += 1;
        }
    }

    fn process_pending(&mut self) {
        loop {
            let Some(l) = (0..self.levels.len()).rev().find(|&l| !self.levels[l].pending.is_empty())
            else {
                break;
            };
            let (p, gi) = self.levels[l].pending.pop_front().expect("non-empty");
            let schreier = {
                let level = &self.levels[l];
                let s = &level.gens[gi];
                let q = s.apply(p);
                let u_p = level.transversal[p as usize].as_ref().expect("rep");
                let u_q = level.transversal[q as usize].as_ref().expect("rep");
                u_p.product(s).product(&u_q.inverse())
            };
            if schreier.is_identity() {
                continue;
            }
            match self.sift_from(l + 1, schreier) {
                Sift::Identity => {}
                Sift::Stuck { residue, level: j } => {
                    for k in (l + 1)..=j {
                        self.insert_gen_at(k, residue.clone());
                    }
                }
                Sift::FellOff { residue } => {
                    let base = residue.min_moved_point().expect("non-identity");
                    self.levels.push(Level::new(self.degree, base));
                    let j = self.levels.len() - 1;
                    for k in (l + 1)..=j {
                        self.insert_gen_at(k, residue.clone());
                    }
                }
            }
        }
    }

    fn sift_from(&self, start: usize, mut g: Perm) -> Sift {
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let p = g.apply(level.base);
            match &level.transversal[p as usize] {
                None => return Sift::Stuck { residue: g, level: j },
                Some(u) => g = g.product(&u.inverse()),
            }
        }
        if g.is_identity() {
            Sift::Identity
        } else {
            Sift::FellOff { residue: g }
        }
    }

    /// Exact group order: the product of the orbit lengths.
    pub fn order(&self) -> BigUint {
        let mut order = BigUint::one();
        for level in &self.levels {
            order *= BigUint::from(level.orbit.len());
        }
        order
    }

    pub fn contains(&self, g: &Perm) -> bool {
        matches!(self.sift_from(0, g.clone()), Sift::Identity)
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// The full strong generating set (the generators of the top level).
    pub fn strong_gens(&self) -> &[Perm] {
        self.levels.first().map_or(&[], |l| &l.gens)
    }

    /// Generators of the subgroup fixing the first `k` base points.
    pub fn gens_at_level(&self, k: usize) -> &[Perm] {
        self.levels.get(k).map_or(&[], |l| &l.gens)
    }

    /// A standalone chain for the subgroup fixing the first `k` base points.
    pub fn tail_chain(&self, k: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels.get(k..).unwrap_or(&[]).to_vec(),
        }
    }
}
