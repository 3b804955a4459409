//! Exact computation in level quotients.
//!
//! The image of a recursion group in the automorphisms of the depth-n
//! truncated tree is a permutation group on the d^n level words (in
//! lexicographic order). Orders, stabilizers, rigid stabilizers, derived
//! subgroups, normal closures and dimension estimates are all computed
//! through deterministic stabilizer chains with exact big-integer
//! arithmetic.

mod chain;

pub use chain::StabChain;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::limits::Limits;
use crate::perm::{self, Perm};
use crate::tree::{self, Vertex};

/// The image of a recursion group on the level-`n` words.
pub struct LevelQuotient {
    d: usize,
    n: u32,
    degree: usize,
    names: Vec<String>,
    gens: Vec<Perm>,
    chain: StabChain,
}

/// A subgroup of a level quotient, with its own chain.
pub struct Subgroup {
    degree: usize,
    gens: Vec<Perm>,
    chain: StabChain,
}

/// Builds the level-`n` quotient of `spec`.
pub fn level_quotient(spec: &GroupSpec, n: u32, limits: &Limits) -> Result<LevelQuotient> {
    let d = spec.arity();
    let degree = tree::point_count(d, n)?;
    let mut gens = Vec::with_capacity(spec.generators().len());
    for i in 0..spec.generators().len() {
        gens.push(spec.generator_machine(i, limits)?.act(n, limits)?);
    }
    let chain = StabChain::build(&gens, degree, &[]);
    Ok(LevelQuotient {
        d,
        n,
        degree,
        names: spec.generator_names(),
        gens,
        chain,
    })
}

impl LevelQuotient {
    pub fn arity(&self) -> usize {
        self.d
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    /// Wraps explicit permutations as a subgroup; membership is checked.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<Subgroup> {
        for g in &gens {
            if !self.contains(g) {
                return Err(Error::NotAMember);
            }
        }
        Ok(Subgroup::generated(gens, self.degree, &[]))
    }

    /// The subgroup fixing every listed point.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<Subgroup> {
        let mut base: Vec<u32> = Vec::with_capacity(points.len());
        let mut seen = BTreeSet::new();
        for &p in points {
            if p >= self.degree {
                return Err(Error::BadPoint(p));
            }
            if seen.insert(p) {
                base.push(p as u32);
            }
        }
        Ok(stabilizer_of(self.chain.strong_gens(), self.degree, &base))
    }

    /// The rigid stabilizer of the vertex `v`: everything fixing all
    /// level words outside the subtree of `v`.
    pub fn rigid_stabilizer(&self, v: &Vertex) -> Result<Subgroup> {
        v.check_arity(self.d)?;
        if v.len() >= self.n as usize {
            return Err(Error::BadVertex(v.to_string(self.d)));
        }
        let inside = tree::subtree_range(v, self.d, self.n)?;
        let outside: Vec<u32> = (0..self.degree as u32)
            .filter(|&p| !inside.contains(&(p as usize)))
            .collect();
        Ok(stabilizer_of(self.chain.strong_gens(), self.degree, &outside))
    }

    /// The smallest normal subgroup containing `elems`.
    pub fn normal_closure(&self, elems: &[Perm]) -> Result<Subgroup> {
        for e in elems {
            if !self.contains(e) {
                return Err(Error::NotAMember);
            }
        }
        Ok(closure_under_conjugation(
            elems.to_vec(),
            &self.gens,
            self.degree,
        ))
    }

    /// The derived subgroup: normal closure of the generator commutators.
    pub fn derived_subgroup(&self) -> Subgroup {
        derived_of(&self.gens, &self.gens, self.degree)
    }

    /// Abelianization order and the orders of the generator images.
    pub fn abelianization(&self) -> AbelianizationData {
        let derived = self.derived_subgroup();
        let derived_order = derived.order();
        let order = self.order() / &derived_order;
        let gen_orders = self
            .gens
            .iter()
            .map(|g| image_order_mod(g, &derived))
            .collect();
        AbelianizationData {
            order,
            derived_order,
            gen_orders,
        }
    }

    /// Subgroup generated by the level images of the given words.
    pub fn subgroup_from_words(
        &self,
        spec: &GroupSpec,
        words: &[crate::group::GroupWord],
        limits: &Limits,
    ) -> Result<Subgroup> {
        let mut gens = Vec::with_capacity(words.len());
        for w in words {
            gens.push(crate::automorphism::evaluate(spec, w, limits)?.act(self.n, limits)?);
        }
        self.subgroup(gens)
    }

    /// Whether `g` moves the vertex `v`, i.e. maps its block of level
    /// words to a different block.
    pub fn moves_vertex(&self, g: &Perm, v: &Vertex) -> Result<bool> {
        let range = tree::subtree_range(v, self.d, self.n)?;
        Ok(!range.contains(&(g.apply(range.start as u32) as usize)))
    }
}

fn stabilizer_of(gens: &[Perm], degree: usize, base_prefix: &[u32]) -> Subgroup {
    let chain = StabChain::build(gens, degree, base_prefix);
    let sub_gens = chain.gens_at_level(base_prefix.len()).to_vec();
    let sub_chain = chain.tail_chain(base_prefix.len());
    Subgroup {
        degree,
        gens: sub_gens,
        chain: sub_chain,
    }
}

fn closure_under_conjugation(seed: Vec<Perm>, conjugators: &[Perm], degree: usize) -> Subgroup {
    let mut gens: Vec<Perm> = Vec::new();
    let mut chain = StabChain::build(&[], degree, &[]);
    let mut queue: alloc::collections::VecDeque<Perm> = alloc::collections::VecDeque::new();
    for g in seed {
        if !g.is_identity() && !chain.contains(&g) {
            chain.add_generator(g.clone());
            gens.push(g.clone());
            queue.push_back(g);
        }
    }
    while let Some(x) = queue.pop_front() {
        for c in conjugators {
            let y = x.conjugate(c);
            if !chain.contains(&y) {
                chain.add_generator(y.clone());
                gens.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Subgroup { degree, gens, chain }
}

fn derived_of(group_gens: &[Perm], conjugators: &[Perm], degree: usize) -> Subgroup {
    let mut seed = Vec::new();
    for (i, a) in group_gens.iter().enumerate() {
        for b in group_gens.iter().skip(i + 1) {
            let c = a.commutator(b);
            if !c.is_identity() {
                seed.push(c);
            }
        }
    }
    closure_under_conjugation(seed, conjugators, degree)
}

fn image_order_mod(g: &Perm, derived: &Subgroup) -> u64 {
    let full_order = g
        .order()
        .to_u64()
        .expect("element order fits in 64 bits at desk scale");
    // The order in the abelianization divides the element order.
    let mut divisors: Vec<u64> = (1..=full_order).filter(|m| full_order % m == 0).collect();
    divisors.sort_unstable();
    for m in divisors {
        if derived.contains(&g.pow(m)) {
            return m;
        }
    }
    full_order
}

impl Subgroup {
    /// Subgroup abstractly generated by `gens` (no membership check).
    pub fn generated(gens: Vec<Perm>, degree: usize, forced_base: &[u32]) -> Subgroup {
        let chain = StabChain::build(&gens, degree, forced_base);
        Subgroup { degree, gens, chain }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gens(&self) -> &[Perm] {
        &self.gens
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.chain.contains(g)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        derived_of(&self.gens, &self.gens, self.degree)
    }

    /// Elements of this subgroup fixing every listed point.
    pub fn pointwise_stabilizer(&self, points: &[u32]) -> Subgroup {
        stabilizer_of(self.chain.strong_gens(), self.degree, points)
    }
}

/// Abelianization data of a level quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationData {
    /// `|G_n| / |G_n'|`.
    pub order: BigUint,
    pub derived_order: BigUint,
    /// Least `m >= 1` with `g^m` in the derived subgroup, per generator.
    pub gen_orders: Vec<u64>,
}

/// Transitivity of the generator images on every level up to `n`.
pub fn is_level_transitive(spec: &GroupSpec, n: u32, limits: &Limits) -> Result<bool> {
    for m in 1..=n {
        let mut gens = Vec::with_capacity(spec.generators().len());
        for i in 0..spec.generators().len() {
            gens.push(spec.generator_machine(i, limits)?.act(m, limits)?);
        }
        if perm::orbit(&gens, 0).len() != tree::point_count(spec.arity(), m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One point of the dimension-estimate sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HdimPoint {
    pub n: u32,
    pub eta: BigRational,
}

/// The sequence `eta_1 .. eta_{n_max}` of normalized dimension estimates
/// `log_d |G_n| / ((d^n - 1)/(d - 1))`.
///
/// Exact rationals whenever the quotient order is a power of `d` (always
/// the case for d = 2); otherwise a rational approximation with 1e-9
/// precision.
pub fn hdim_sequence(spec: &GroupSpec, n_max: u32, limits: &Limits) -> Result<Vec<HdimPoint>> {
    (1..=n_max).map(|n| hdim_point(spec, n, limits)).collect()
}

/// A single point of the estimate sequence; levels are independent.
pub fn hdim_point(spec: &GroupSpec, n: u32, limits: &Limits) -> Result<HdimPoint> {
    let q = level_quotient(spec, n, limits)?;
    Ok(HdimPoint {
        n,
        eta: eta_of(&q.order(), spec.arity(), n),
    })
}

/// Absolute and relative dimension estimates of a subgroup at one level.
///
/// Absolute normalizes by the full tree automorphism group, relative by
/// the parent quotient.
pub fn subgroup_hdim(parent: &LevelQuotient, sub: &Subgroup) -> (BigRational, BigRational) {
    let d = parent.arity();
    let n = parent.level();
    let absolute = eta_of(&sub.order(), d, n);
    let relative = log_ratio(&sub.order(), &parent.order(), d);
    (absolute, relative)
}

fn eta_of(order: &BigUint, d: usize, n: u32) -> BigRational {
    let mut e_n = BigUint::zero();
    let mut power = BigUint::one();
    for _ in 0..n {
        e_n += &power;
        power *= BigUint::from(d);
    }
    let e_n = e_n.to_u32().expect("level bounded by limits");
    log_ratio(order, &BigUint::from(d).pow(e_n), d)
}

/// `log_d(a) / log_d(b)` as an exact rational when both are d-powers,
/// otherwise rounded to 1e-9.
fn log_ratio(a: &BigUint, b: &BigUint, d: usize) -> BigRational {
    if a.is_one() {
        return BigRational::zero();
    }
    match (perfect_log(a, d), perfect_log(b, d)) {
        (Some(ka), Some(kb)) => BigRational::new(BigInt::from(ka), BigInt::from(kb)),
        _ => {
            let value = log2_big(a) / log2_big(b);
            let scaled = libm::round(value * 1e9) as i64;
            BigRational::new(BigInt::from(scaled), BigInt::from(1_000_000_000i64))
        }
    }
}

/// `k` with `x = d^k`, if it exists.
fn perfect_log(x: &BigUint, d: usize) -> Option<u64> {
    let d = BigUint::from(d);
    let mut x = x.clone();
    let mut k = 0u64;
    while x > BigUint::one() {
        let (q, r) = x.div_rem(&d);
        if !r.is_zero() {
            return None;
        }
        x = q;
        k += 1;
    }
    Some(k)
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return libm::log2(x.to_u64().expect("fits") as f64);
    }
    let shift = bits - 53;
    let top = (x >> shift).to_u64().expect("53 bits fit");
    libm::log2(top as f64) + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate_elements;

    fn spec(text: &str) -> GroupSpec {
        GroupSpec::parse(text).unwrap()
    }

    fn adding() -> GroupSpec {
        spec("alphabet 2\ngen a = (0 1) (a, 1)")
    }

    fn basilica() -> GroupSpec {
        spec("alphabet 2\ngen a = (0 1) (b, 1)\ngen b = e (a, 1)")
    }

    fn chebyshev() -> GroupSpec {
        spec("alphabet 2\ngen a = (0 1)\ngen b = e (a, b)")
    }

    fn grigorchuk() -> GroupSpec {
        spec("alphabet 2\ngen a = (0 1)\ngen b = e (a, c)\ngen c = e (a, d)\ngen d = e (1, b)")
    }

    #[test]
    fn cyclic_quotients_of_the_adding_machine() {
        let limits = Limits::default();
        let q = level_quotient(&adding(), 3, &limits).unwrap();
        assert_eq!(q.order(), BigUint::from(8u32));
        let elems = enumerate_elements(q.gens(), q.degree(), 10_000).unwrap();
        assert_eq!(elems.len(), 8);
    }

    #[test]
    fn basilica_level_two_has_order_eight() {
        let limits = Limits::default();
        let q = level_quotient(&basilica(), 2, &limits).unwrap();
        assert_eq!(q.order(), BigUint::from(8u32));
        let elems = enumerate_elements(q.gens(), 4, 10_000).unwrap();
        assert_eq!(elems.len(), 8);
    }

    #[test]
    fn chebyshev_level_two_is_dihedral_of_order_eight() {
        let limits = Limits::default();
        let q = level_quotient(&chebyshev(), 2, &limits).unwrap();
        assert_eq!(q.order(), BigUint::from(8u32));
        // Dihedral: derived subgroup of order 2, abelianization of order 4.
        let ab = q.abelianization();
        assert_eq!(ab.order, BigUint::from(4u32));
        assert_eq!(ab.derived_order, BigUint::from(2u32));
    }

    #[test]
    fn trivial_actions_give_trivial_quotients() {
        let limits = Limits::default();
        let q = level_quotient(&spec("alphabet 2\ngen a = e (a, a)"), 1, &limits).unwrap();
        assert!(q.order().is_one());
        assert!(!is_level_transitive(&spec("alphabet 2\ngen a = e (a, a)"), 1, &limits).unwrap());
    }

    #[test]
    fn transitivity_of_the_bundled_groups() {
        let limits = Limits::default();
        assert!(is_level_transitive(&adding(), 12, &limits).unwrap());
        assert!(is_level_transitive(&basilica(), 10, &limits).unwrap());
        assert!(is_level_transitive(&chebyshev(), 10, &limits).unwrap());
        assert!(is_level_transitive(&grigorchuk(), 8, &limits).unwrap());
    }

    #[test]
    fn stabilizers_and_rigid_stabilizers() {
        let limits = Limits::default();
        // Stabilizer of nothing is the whole group.
        let q = level_quotient(&basilica(), 2, &limits).unwrap();
        assert_eq!(q.pointwise_stabilizer(&[]).unwrap().order(), q.order());
        // A 4-cycle has a trivial point stabilizer in the cyclic group.
        let q = level_quotient(&adding(), 2, &limits).unwrap();
        assert!(q.pointwise_stabilizer(&[0]).unwrap().is_trivial());
        // The action is faithful: stabilizing every point is trivial.
        let q = level_quotient(&basilica(), 2, &limits).unwrap();
        assert!(q.pointwise_stabilizer(&[0, 1, 2, 3]).unwrap().is_trivial());
        // Cyclic level images have no rigid elements.
        let q = level_quotient(&adding(), 3, &limits).unwrap();
        let v = Vertex::parse("0", 2).unwrap();
        assert!(q.rigid_stabilizer(&v).unwrap().is_trivial());
        assert!(q.rigid_stabilizer(&Vertex::parse("000", 2).unwrap()).is_err());
    }

    #[test]
    fn grigorchuk_rigid_stabilizers_are_nontrivial() {
        let limits = Limits::default();
        let q = level_quotient(&grigorchuk(), 5, &limits).unwrap();
        let r0 = q.rigid_stabilizer(&Vertex::parse("0", 2).unwrap()).unwrap();
        let r1 = q.rigid_stabilizer(&Vertex::parse("1", 2).unwrap()).unwrap();
        assert!(!r0.is_trivial());
        assert!(!r1.is_trivial());
        // Same-level rigid stabilizers commute elementwise.
        for a in r0.gens() {
            for b in r1.gens() {
                assert_eq!(a.product(b), b.product(a));
            }
        }
        // And intersect trivially: an element of both fixes everything.
        let other_subtree: Vec<u32> = (0..16).collect();
        assert!(r0.pointwise_stabilizer(&other_subtree).is_trivial());
    }

    #[test]
    fn normal_closure_and_derived() {
        let limits = Limits::default();
        let q = level_quotient(&basilica(), 3, &limits).unwrap();
        // Closure of the identity is trivial.
        let id = Perm::identity(q.degree());
        assert!(q.normal_closure(&[id]).unwrap().is_trivial());
        // Closure is conjugation-invariant.
        let n = q.normal_closure(&[q.gens()[0].clone()]).unwrap();
        for x in n.gens() {
            for c in q.gens() {
                assert!(n.contains(&x.conjugate(c)));
            }
        }
        // Derived subgroup of an abelian quotient is trivial.
        let qa = level_quotient(&adding(), 4, &limits).unwrap();
        assert!(qa.derived_subgroup().is_trivial());
        // Abelianization sizes multiply back to the group order.
        let ab = q.abelianization();
        assert_eq!(ab.order.clone() * ab.derived_order.clone(), q.order());
        // An element outside the group is rejected.
        let stranger = Perm::from_cycles(q.degree(), &[alloc::vec![0, 1, 2]]).unwrap();
        assert!(matches!(q.normal_closure(&[stranger]), Err(Error::NotAMember)));
    }

    #[test]
    fn basilica_abelianization_at_level_two() {
        let limits = Limits::default();
        let q = level_quotient(&basilica(), 2, &limits).unwrap();
        let ab = q.abelianization();
        assert_eq!(ab.order, BigUint::from(4u32));
        assert_eq!(ab.gen_orders, alloc::vec![2, 2]);
    }

    #[test]
    fn hdim_of_the_adding_machine() {
        let limits = Limits::default();
        let seq = hdim_sequence(&adding(), 6, &limits).unwrap();
        for point in &seq {
            let expected = BigRational::new(
                BigInt::from(point.n),
                BigInt::from((1u64 << point.n) - 1),
            );
            assert_eq!(point.eta, expected);
        }
        assert_eq!(seq[2].eta, BigRational::new(BigInt::from(3), BigInt::from(7)));
    }

    #[test]
    fn subgroup_from_words_and_relative_dimension() {
        let limits = Limits::default();
        let spec = basilica();
        let q = level_quotient(&spec, 3, &limits).unwrap();
        assert!(q.subgroup_from_words(&spec, &[], &limits).unwrap().is_trivial());
        let words = [spec.parse_word("a^2").unwrap(), spec.parse_word("b").unwrap()];
        let sub = q.subgroup_from_words(&spec, &words, &limits).unwrap();
        assert!(sub.order() < q.order());
        let elems = enumerate_elements(sub.gens(), q.degree(), 10_000).unwrap();
        assert_eq!(BigUint::from(elems.len()), sub.order());
        let (absolute, relative) = subgroup_hdim(&q, &sub);
        assert!(absolute <= relative);
        // The whole generator set gives back the full quotient.
        let all = [spec.parse_word("a").unwrap(), spec.parse_word("b").unwrap()];
        let sub = q.subgroup_from_words(&spec, &all, &limits).unwrap();
        assert_eq!(sub.order(), q.order());
    }

    #[test]
    fn quotient_orders_divide_the_full_automorphism_group() {
        let limits = Limits::default();
        for g in [adding(), basilica(), chebyshev(), grigorchuk()] {
            for n in 1..=4 {
                let q = level_quotient(&g, n, &limits).unwrap();
                let full = BigUint::from(2u32).pow((1u32 << n) - 1);
                assert!(full.clone() % q.order() == BigUint::zero());
            }
        }
    }
}
