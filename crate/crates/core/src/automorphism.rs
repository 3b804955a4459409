//! Finite-state automorphisms of the d-ary rooted tree.
//!
//! An [`Automorphism`] is a Mealy-type machine: every state carries a
//! permutation of the letters (its action on the first level) and one
//! successor state per letter (its section at that letter). The action
//! convention is
//!
//! ```text
//! (x w)^g = x^{pi_g} . w^{g|_x}
//! ```
//!
//! so sections are indexed by the *source* letter and composition is
//! written from left to right: `(g h)|_x = g|_x . h|_{x^g}`.
//!
//! Machines are kept in canonical form at all times: unreachable states
//! are trimmed, extensionally equal states are merged by partition
//! refinement, and states are renumbered breadth-first from the initial
//! state (which is always state `0`). Extensional equality of tree
//! automorphisms therefore coincides with structural equality of the
//! machines, and equal elements hash equally.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupWord};
use crate::limits::Limits;
use crate::perm::Perm;
use crate::tree::{self, Vertex};

/// One machine state: first-level permutation plus section references.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct State {
    perm: Perm,
    sections: Vec<usize>,
}

/// A finite-state automorphism of the d-ary tree, in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    d: usize,
    states: Vec<State>,
}

impl core::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "Automorphism(d={}, {} states)", self.d, self.states.len())?;
        for (i, st) in self.states.iter().enumerate() {
            writeln!(f, "  {i}: {:?} {:?}", st.perm, st.sections)?;
        }
        Ok(())
    }
}

/// Result of a bounded order computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    /// The exact (finite) order, certified by the word problem.
    Finite(u64),
    /// A lower bound: the exact order of the level action at the deepest
    /// level inspected.
    AtLeast(BigUint),
}

impl Automorphism {
    pub fn identity(d: usize) -> Automorphism {
        Automorphism {
            d,
            states: vec![State {
                perm: Perm::identity(d),
                sections: vec![0; d],
            }],
        }
    }

    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// The permutation of the letters induced at the root.
    pub fn root_perm(&self) -> &Perm {
        &self.states[0].perm
    }

    pub fn is_identity(&self) -> bool {
        self.states.len() == 1 && self.states[0].perm.is_identity()
    }

    /// Canonicalizes a raw machine: trim, minimize, renumber.
    fn canonical(d: usize, states: Vec<State>, initial: usize) -> Automorphism {
        // Reachable part, breadth-first from the initial state.
        let mut reach_id = BTreeMap::new();
        let mut reach_order = vec![initial];
        reach_id.insert(initial, 0usize);
        let mut i = 0;
        while i < reach_order.len() {
            let s = reach_order[i];
            for &t in &states[s].sections {
                if let Entry::Vacant(e) = reach_id.entry(t) {
                    e.insert(reach_order.len());
                    reach_order.push(t);
                }
            }
            i += 1;
        }

        // Partition refinement: start from the root permutations, refine by
        // the classes of the sections until stable.
        let mut class: BTreeMap<usize, usize> = BTreeMap::new();
        {
            let mut by_perm: BTreeMap<&Perm, usize> = BTreeMap::new();
            for &s in &reach_order {
                let next = by_perm.len();
                let c = *by_perm.entry(&states[s].perm).or_insert(next);
                class.insert(s, c);
            }
        }
        loop {
            let mut by_sig: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
            let mut next: BTreeMap<usize, usize> = BTreeMap::new();
            for &s in &reach_order {
                let sig = (
                    class[&s],
                    states[s].sections.iter().map(|t| class[t]).collect::<Vec<_>>(),
                );
                let fresh = by_sig.len();
                let c = *by_sig.entry(sig).or_insert(fresh);
                next.insert(s, c);
            }
            if by_sig.len() == class.values().collect::<alloc::collections::BTreeSet<_>>().len() {
                class = next;
                break;
            }
            class = next;
        }

        // Renumber classes breadth-first from the initial class, following
        // sections in letter order.
        let mut canon_of_class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut rep_of_canon: Vec<usize> = Vec::new();
        canon_of_class.insert(class[&initial], 0);
        rep_of_canon.push(initial);
        let mut i = 0;
        while i < rep_of_canon.len() {
            let rep = rep_of_canon[i];
            for &t in &states[rep].sections {
                let c = class[&t];
                if let Entry::Vacant(e) = canon_of_class.entry(c) {
                    e.insert(rep_of_canon.len());
                    rep_of_canon.push(t);
                }
            }
            i += 1;
        }

        let states = rep_of_canon
            .iter()
            .map(|&rep| State {
                perm: states[rep].perm.clone(),
                sections: states[rep]
                    .sections
                    .iter()
                    .map(|t| canon_of_class[&class[t]])
                    .collect(),
            })
            .collect();
        Automorphism { d, states }
    }

    /// Product `self . other` (apply `self` first).
    pub fn compose(&self, other: &Automorphism, limits: &Limits) -> Result<Automorphism> {
        if self.d != other.d {
            return Err(Error::ArityMismatch(self.d, other.d));
        }
        let d = self.d;
        let mut id_of_pair: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs = vec![(0usize, 0usize)];
        id_of_pair.insert((0, 0), 0);
        let mut states = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (a, b) = pairs[i];
            let sa = &self.states[a];
            let sb = &other.states[b];
            let mut sections = Vec::with_capacity(d);
            for x in 0..d {
                let pair = (sa.sections[x], sb.sections[sa.perm.apply(x as u32) as usize]);
                let next = id_of_pair.len();
                let id = *id_of_pair.entry(pair).or_insert(next);
                if id == next {
                    if next >= limits.max_states {
                        return Err(Error::ResourceLimit(format!(
                            "product machine exceeds {} states",
                            limits.max_states
                        )));
                    }
                    pairs.push(pair);
                }
                sections.push(id);
            }
            states.push(State {
                perm: sa.perm.product(&sb.perm),
                sections,
            });
            i += 1;
        }
        Ok(Self::canonical(d, states, 0))
    }

    pub fn inverse(&self) -> Automorphism {
        let states = self
            .states
            .iter()
            .map(|st| {
                let inv = st.perm.inverse();
                State {
                    sections: (0..self.d).map(|x| st.sections[inv.apply(x as u32) as usize]).collect(),
                    perm: inv,
                }
            })
            .collect();
        Self::canonical(self.d, states, 0)
    }

    /// The section `g|_v`, by iterating single-letter sections.
    pub fn section(&self, v: &Vertex) -> Result<Automorphism> {
        v.check_arity(self.d)?;
        let mut s = 0usize;
        for &x in v.letters() {
            s = self.states[s].sections[x as usize];
        }
        Ok(Self::canonical(self.d, self.states.clone(), s))
    }

    /// Image of a vertex under the automorphism.
    pub fn apply_vertex(&self, v: &Vertex) -> Result<Vertex> {
        v.check_arity(self.d)?;
        let mut s = 0usize;
        let mut letters = Vec::with_capacity(v.len());
        for &x in v.letters() {
            letters.push(self.states[s].perm.apply(x));
            s = self.states[s].sections[x as usize];
        }
        Ok(Vertex::new(letters))
    }

    /// The permutation induced on the `d^n` level-`n` words, in
    /// lexicographic point order.
    pub fn act(&self, n: u32, limits: &Limits) -> Result<Perm> {
        if n > limits.max_level {
            return Err(Error::LevelTooLarge {
                requested: n,
                max: limits.max_level,
            });
        }
        let count = tree::point_count(self.d, n)?;
        let mut images = Vec::with_capacity(count);
        for idx in 0..count {
            let word = tree::word_of_index(idx, self.d, n);
            let mut s = 0usize;
            let mut image = 0usize;
            for &x in &word {
                image = image * self.d + self.states[s].perm.apply(x) as usize;
                s = self.states[s].sections[x as usize];
            }
            images.push(image as u32);
        }
        Ok(Perm::from_images(images).expect("level action is a bijection"))
    }

    /// Power by squaring; canonical form keeps the factors minimal.
    pub fn pow(&self, e: i64, limits: &Limits) -> Result<Automorphism> {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Automorphism::identity(self.d);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq, limits)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq, limits)?;
            }
        }
        Ok(acc)
    }

    /// Bounded order computation.
    ///
    /// Returns `Finite(m)` for the least `m <= max_order` with `g^m = 1`
    /// (certified by the word problem), and otherwise `AtLeast(k)` where
    /// `k` is the exact order of the level-`max_level` action. Any finite
    /// order is a multiple of `k`, so only multiples of `k` are tested.
    pub fn order_bounded(
        &self,
        max_level: u32,
        max_order: u64,
        limits: &Limits,
    ) -> Result<ElementOrder> {
        if max_level < 1 || max_order < 1 {
            return Err(Error::OrderMismatch(
                "max_level and max_order must be at least 1".into(),
            ));
        }
        let level_perm = self.act(max_level, limits)?;
        let k = level_perm.order();
        let Some(k_small) = k.to_u64().filter(|&k| k <= max_order) else {
            return Ok(ElementOrder::AtLeast(k));
        };
        let step = self.pow(k_small as i64, limits)?;
        let mut acc = step.clone();
        let mut m = k_small;
        loop {
            if acc.is_identity() {
                return Ok(ElementOrder::Finite(m));
            }
            let Some(next) = m.checked_add(k_small).filter(|&next| next <= max_order) else {
                return Ok(ElementOrder::AtLeast(k));
            };
            m = next;
            acc = acc.compose(&step, limits)?;
        }
    }
}

/// Signed generator reference: `k+1` for generator `k`, `-(k+1)` for its inverse.
type Signed = i32;

fn reduce_word(word: &mut Vec<Signed>) {
    let mut out: Vec<Signed> = Vec::with_capacity(word.len());
    for &s in word.iter() {
        if out.last().is_some_and(|&t| t == -s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    *word = out;
}

struct FlatSpec {
    d: usize,
    perms: Vec<Perm>,
    inv_perms: Vec<Perm>,
    /// Per generator, per source letter: the section as a reduced signed word.
    sections: Vec<Vec<Vec<Signed>>>,
}

impl FlatSpec {
    fn new(spec: &GroupSpec, limits: &Limits) -> Result<FlatSpec> {
        let d = spec.arity();
        let mut perms = Vec::new();
        let mut sections = Vec::new();
        for gen in spec.generators() {
            perms.push(gen.root_perm.clone());
            let mut per_letter = Vec::with_capacity(d);
            for word in &gen.sections {
                per_letter.push(flatten_word(word, limits)?);
            }
            sections.push(per_letter);
        }
        let inv_perms = perms.iter().map(Perm::inverse).collect();
        Ok(FlatSpec {
            d,
            perms,
            inv_perms,
            sections,
        })
    }
}

fn flatten_word(word: &GroupWord, limits: &Limits) -> Result<Vec<Signed>> {
    let mut out = Vec::new();
    for term in word.terms() {
        let letter = term.gen as Signed + 1;
        let signed = if term.exp < 0 { -letter } else { letter };
        let count = term.exp.unsigned_abs();
        if count as usize > limits.max_states {
            return Err(Error::ResourceLimit(format!(
                "exponent {} too large to expand",
                term.exp
            )));
        }
        for _ in 0..count {
            out.push(signed);
        }
    }
    reduce_word(&mut out);
    Ok(out)
}

/// Realizes a word in the generators of `spec` as a canonical machine.
///
/// States of the intermediate machine are freely reduced words; for
/// automaton groups the construction always terminates since sections of
/// a word are no longer than the word itself. For general section words
/// the closure may grow, bounded by `limits.max_states`.
pub fn evaluate(spec: &GroupSpec, word: &GroupWord, limits: &Limits) -> Result<Automorphism> {
    for term in word.terms() {
        if term.gen >= spec.generators().len() {
            return Err(Error::UnknownGenerator(format!("#{}", term.gen)));
        }
    }
    let flat = FlatSpec::new(spec, limits)?;
    let initial = flatten_word(word, limits)?;

    let mut id_of_word: BTreeMap<Vec<Signed>, usize> = BTreeMap::new();
    let mut words = vec![initial.clone()];
    id_of_word.insert(initial, 0);
    let mut states: Vec<State> = Vec::new();
    let mut i = 0;
    while i < words.len() {
        let w = words[i].clone();
        // Root permutation of the word.
        let mut perm = Perm::identity(flat.d);
        for &s in &w {
            let g = (s.unsigned_abs() - 1) as usize;
            perm = perm.product(if s > 0 { &flat.perms[g] } else { &flat.inv_perms[g] });
        }
        // Section at each letter: chain rule, tracking the letter image.
        let mut sections = Vec::with_capacity(flat.d);
        for x in 0..flat.d as u32 {
            let mut cur = x;
            let mut sec: Vec<Signed> = Vec::new();
            for &s in &w {
                let g = (s.unsigned_abs() - 1) as usize;
                if s > 0 {
                    sec.extend_from_slice(&flat.sections[g][cur as usize]);
                    cur = flat.perms[g].apply(cur);
                } else {
                    cur = flat.inv_perms[g].apply(cur);
                    sec.extend(flat.sections[g][cur as usize].iter().rev().map(|&t| -t));
                }
                if sec.len() > limits.max_states {
                    return Err(Error::ResourceLimit(format!(
                        "section words exceed {} letters",
                        limits.max_states
                    )));
                }
            }
            reduce_word(&mut sec);
            let next = id_of_word.len();
            let id = *id_of_word.entry(sec.clone()).or_insert(next);
            if id == next {
                if next >= limits.max_states {
                    return Err(Error::ResourceLimit(format!(
                        "word machine exceeds {} states",
                        limits.max_states
                    )));
                }
                words.push(sec);
            }
            sections.push(id);
        }
        states.push(State { perm, sections });
        i += 1;
    }
    Ok(Automorphism::canonical(flat.d, states, 0))
}
