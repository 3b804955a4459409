//! Post-critical portraits, orbifold signatures and the recursion builder
//! for quadratic portraits.
//!
//! A portrait is the finite dynamical system of a post-critically finite
//! polynomial restricted to its critical and post-critical points, with
//! local degrees. The point at infinity is distinguished: a polynomial
//! fixes it and is completely ramified there.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Generator, GroupSpec, GroupWord};
use crate::limits::Limits;
use crate::perm::Perm;

/// Raw portrait data, as carried by the portrait JSON document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPortrait {
    pub degree: u32,
    pub points: Vec<String>,
    pub infinity: String,
    pub map: BTreeMap<String, String>,
    pub local_degree: BTreeMap<String, u32>,
}

/// A validated post-critical portrait.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostCriticalPortrait {
    degree: u32,
    ids: Vec<String>,
    inf: usize,
    map: Vec<usize>,
    local_degree: Vec<u32>,
}

pub const INFINITY_ID: &str = "inf";

impl PostCriticalPortrait {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn point_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, point: usize) -> &str {
        &self.ids[point]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|p| p == id)
    }

    pub fn infinity(&self) -> usize {
        self.inf
    }

    pub fn map(&self, point: usize) -> usize {
        self.map[point]
    }

    pub fn local_degree(&self, point: usize) -> u32 {
        self.local_degree[point]
    }

    /// Critical points: local degree at least two (infinity included).
    pub fn critical_points(&self) -> Vec<usize> {
        (0..self.ids.len())
            .filter(|&p| self.local_degree[p] >= 2)
            .collect()
    }

    pub fn is_critical(&self, point: usize) -> bool {
        self.local_degree[point] >= 2
    }

    /// The unique finite critical point of a quadratic portrait.
    pub fn finite_critical_point(&self) -> Result<usize> {
        if self.degree != 2 {
            return Err(Error::NotQuadratic(format!("degree is {}", self.degree)));
        }
        let finite: Vec<usize> = self
            .critical_points()
            .into_iter()
            .filter(|&p| p != self.inf)
            .collect();
        match finite.as_slice() {
            [c] if self.local_degree[*c] == 2 => Ok(*c),
            _ => Err(Error::NotQuadratic(format!(
                "expected exactly one finite critical point of degree 2, found {}",
                finite.len()
            ))),
        }
    }

    /// Tail length and cycle length of the forward orbit of `point`,
    /// counting `point` itself as part of the tail.
    fn orbit_shape(&self, point: usize) -> (u32, u32) {
        let mut seen: BTreeMap<usize, u32> = BTreeMap::new();
        let mut p = point;
        let mut step = 0u32;
        loop {
            if let Some(&first) = seen.get(&p) {
                return (first, step - first);
            }
            seen.insert(p, step);
            p = self.map[p];
            step += 1;
        }
    }
}

/// Checks all portrait invariants and freezes the value.
pub fn validate_portrait(raw: &RawPortrait) -> Result<PostCriticalPortrait> {
    let d = raw.degree;
    if d < 2 {
        return Err(Error::BadLocalDegree {
            point: String::from(INFINITY_ID),
            degree: d,
        });
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, id) in raw.points.iter().enumerate() {
        if index.insert(id.as_str(), i).is_some() {
            return Err(Error::DuplicatePoint(id.clone()));
        }
    }
    if raw.infinity != INFINITY_ID {
        return Err(Error::MissingInfinity(format!(
            "the distinguished id must be `{INFINITY_ID}`, found `{}`",
            raw.infinity
        )));
    }
    let Some(&inf) = index.get(INFINITY_ID) else {
        return Err(Error::MissingInfinity(String::from("`inf` is not listed")));
    };

    let mut map = Vec::with_capacity(raw.points.len());
    for id in &raw.points {
        let Some(target) = raw.map.get(id) else {
            return Err(Error::UnreachableCycle(id.clone()));
        };
        let Some(&t) = index.get(target.as_str()) else {
            return Err(Error::UnknownPoint(target.clone()));
        };
        map.push(t);
    }
    for key in raw.map.keys() {
        if !index.contains_key(key.as_str()) {
            return Err(Error::UnknownPoint(key.clone()));
        }
    }

    let mut local_degree = Vec::with_capacity(raw.points.len());
    for id in &raw.points {
        let deg = raw.local_degree.get(id).copied().unwrap_or(0);
        if deg < 1 || deg > d {
            return Err(Error::BadLocalDegree {
                point: id.clone(),
                degree: deg,
            });
        }
        local_degree.push(deg);
    }
    for key in raw.local_degree.keys() {
        if !index.contains_key(key.as_str()) {
            return Err(Error::UnknownPoint(key.clone()));
        }
    }

    if map[inf] != inf {
        return Err(Error::MissingInfinity(String::from("`inf` is not fixed")));
    }
    if local_degree[inf] != d {
        return Err(Error::BadLocalDegree {
            point: String::from(INFINITY_ID),
            degree: local_degree[inf],
        });
    }

    let budget: u32 = raw
        .points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != inf)
        .map(|(i, _)| local_degree[i] - 1)
        .sum();
    if budget > d - 1 {
        return Err(Error::RamificationBudgetViolated {
            got: budget,
            limit: d - 1,
        });
    }

    Ok(PostCriticalPortrait {
        degree: d,
        ids: raw.points.clone(),
        inf,
        map,
        local_degree,
    })
}

/// The post-critical set: the union of the strict forward orbits of the
/// critical points.
pub fn post_critical_set(p: &PostCriticalPortrait) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for c in p.critical_points() {
        let mut q = p.map(c);
        while out.insert(q) {
            q = p.map(q);
        }
    }
    out
}

/// An orbifold weight: a finite integer at least two, or infinity on
/// cycles through critical points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Finite(BigUint),
    Infinite,
}

impl Weight {
    /// `1 - 1/nu`, with `1/inf = 0`.
    fn chi_contribution(&self) -> BigRational {
        match self {
            Weight::Infinite => BigRational::one(),
            Weight::Finite(nu) => {
                BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(nu.clone()))
            }
        }
    }
}

/// Signature classification by the sign of the Euler characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbifoldClass {
    Euclidean,
    Hyperbolic,
    Spherical,
}

impl OrbifoldClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbifoldClass::Euclidean => "euclidean",
            OrbifoldClass::Hyperbolic => "hyperbolic",
            OrbifoldClass::Spherical => "spherical",
        }
    }
}

/// The orbifold signature: weights on post-critical points, the exact
/// Euler characteristic and its sign class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldSignature {
    /// Weight per post-critical point, keyed by point index.
    pub nu: BTreeMap<usize, Weight>,
    pub chi: BigRational,
    pub cls: OrbifoldClass,
}

/// Computes the orbifold signature.
///
/// A post-critical point on a periodic cycle through a critical point has
/// infinite weight; otherwise the weight is the least common multiple of
/// the degrees of the portrait map along every critical path into the
/// point.
pub fn orbifold(p: &PostCriticalPortrait) -> OrbifoldSignature {
    let pcs = post_critical_set(p);

    // Points lying on a cycle that passes through a critical point.
    let mut on_critical_cycle = BTreeSet::new();
    for q in 0..p.point_count() {
        let (tail, cycle) = p.orbit_shape(q);
        if tail == 0 {
            // q is periodic; walk its cycle and look for a critical point.
            let mut r = q;
            let mut critical = false;
            for _ in 0..cycle {
                critical |= p.is_critical(r);
                r = p.map(r);
            }
            if critical {
                on_critical_cycle.insert(q);
            }
        }
    }

    let mut nu: BTreeMap<usize, Weight> = BTreeMap::new();
    for &q in &pcs {
        if on_critical_cycle.contains(&q) {
            nu.insert(q, Weight::Infinite);
            continue;
        }
        let mut acc = BigUint::one();
        for c in p.critical_points() {
            let (tail, cycle) = p.orbit_shape(c);
            let bound = tail + cycle;
            let mut path_degree = BigUint::from(p.local_degree(c));
            let mut r = p.map(c);
            for _ in 1..=bound {
                if r == q {
                    acc = acc.lcm(&path_degree);
                }
                path_degree *= BigUint::from(p.local_degree(r));
                r = p.map(r);
            }
        }
        debug_assert!(acc >= BigUint::from(2u32), "weights are at least 2 on P_f");
        nu.insert(q, Weight::Finite(acc));
    }

    let mut chi = BigRational::from_integer(BigInt::from(2));
    for weight in nu.values() {
        chi -= weight.chi_contribution();
    }
    let cls = if chi.is_zero() {
        OrbifoldClass::Euclidean
    } else if chi.is_negative() {
        OrbifoldClass::Hyperbolic
    } else {
        OrbifoldClass::Spherical
    };
    OrbifoldSignature { nu, chi, cls }
}

/// All critically exceptional subsets and their union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalResult {
    pub maximal: BTreeSet<usize>,
    pub all_exceptional: Vec<BTreeSet<usize>>,
}

impl ExceptionalResult {
    /// The finite points of the maximal exceptional set.
    pub fn maximal_finite(&self, p: &PostCriticalPortrait) -> BTreeSet<usize> {
        self.maximal
            .iter()
            .copied()
            .filter(|&q| q != p.infinity())
            .collect()
    }
}

/// Exhaustive search for critically exceptional subsets of the
/// post-critical set.
///
/// A subset qualifies when the portrait accounts for all `d` preimages
/// (with multiplicity) of each of its points, and the known preimages
/// minus the critical and post-critical points outside the subset give
/// back exactly the subset.
pub fn maximal_exceptional_set(p: &PostCriticalPortrait) -> ExceptionalResult {
    let pcs: Vec<usize> = post_critical_set(p).into_iter().collect();
    let critical: BTreeSet<usize> = p.critical_points().into_iter().collect();
    let c_union_p: BTreeSet<usize> = critical
        .iter()
        .copied()
        .chain(pcs.iter().copied())
        .collect();

    let mut all = Vec::new();
    for mask in 0u64..(1 << pcs.len()) {
        let subset: BTreeSet<usize> = pcs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &q)| q)
            .collect();

        // (a) every preimage of the subset is known to the portrait.
        let fully_accounted = subset.iter().all(|&q| {
            let known: u32 = (0..p.point_count())
                .filter(|&r| p.map(r) == q)
                .map(|r| p.local_degree(r))
                .sum();
            known == p.degree()
        });
        if !fully_accounted {
            continue;
        }

        // (b) the set equation on known preimages.
        let preimages: BTreeSet<usize> = (0..p.point_count())
            .filter(|&r| subset.contains(&p.map(r)))
            .collect();
        let lhs: BTreeSet<usize> = preimages
            .into_iter()
            .filter(|r| !(c_union_p.contains(r) && !subset.contains(r)))
            .collect();
        if lhs == subset {
            all.push(subset);
        }
    }

    let maximal = all.iter().flatten().copied().collect();
    ExceptionalResult {
        maximal,
        all_exceptional: all,
    }
}

/// Tail/cycle shape of the critical orbit of a quadratic portrait.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitType {
    Periodic(u32),
    Preperiodic(u32, u32),
}

impl core::fmt::Display for OrbitType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrbitType::Periodic(k) => write!(f, "periodic({k})"),
            OrbitType::Preperiodic(m, k) => write!(f, "preperiodic({m},{k})"),
        }
    }
}

/// Classifies the forward orbit of the finite critical point.
pub fn critical_orbit_type(p: &PostCriticalPortrait) -> Result<OrbitType> {
    let c = p.finite_critical_point()?;
    let (tail, cycle) = p.orbit_shape(c);
    Ok(if tail == 0 {
        OrbitType::Periodic(cycle)
    } else {
        OrbitType::Preperiodic(tail, cycle)
    })
}

/// Letter placement overrides for [`build_img`]: point id to letter.
pub type Placement = BTreeMap<String, u32>;

/// Builds the wreath recursion of the tree action associated with a
/// quadratic portrait.
///
/// One generator is emitted per finite post-critical point, named `a`,
/// `b`, ... along the forward orbit of the critical value. The critical
/// value's generator swaps the two letters and carries the critical
/// point's generator (when post-critical) as its section, at letter 0 by
/// default. Every other generator fixes the letters and carries one
/// section per post-critical preimage, placed in portrait order by
/// default. The emitted recursion must pass kneading validation and its
/// generator product must act transitively on every level up to
/// `check_depth`.
pub fn build_img(
    p: &PostCriticalPortrait,
    placement: Option<&Placement>,
    check_depth: u32,
    limits: &Limits,
) -> Result<GroupSpec> {
    let c = p.finite_critical_point()?;
    let critical_value = p.map(c);
    if critical_value == p.infinity() {
        return Err(Error::NotQuadratic(String::from(
            "the critical value of a polynomial portrait must be finite",
        )));
    }

    // Finite post-critical points in forward-orbit order from the
    // critical value; for quadratics this is all of them.
    let mut orbit = Vec::new();
    let mut q = critical_value;
    while !orbit.contains(&q) {
        orbit.push(q);
        q = p.map(q);
        if q == p.infinity() {
            break;
        }
    }
    let gen_of_point: BTreeMap<usize, usize> =
        orbit.iter().enumerate().map(|(i, &q)| (q, i)).collect();

    let letter_of = |point: usize, default: u32| -> Result<u32> {
        let Some(placement) = placement else {
            return Ok(default);
        };
        match placement.get(p.id(point)) {
            None => Ok(default),
            Some(&l) if l < 2 => Ok(l),
            Some(&l) => Err(Error::PlacementInvalid(format!(
                "letter {l} out of range for `{}`",
                p.id(point)
            ))),
        }
    };

    let mut generators = Vec::with_capacity(orbit.len());
    for (i, &q) in orbit.iter().enumerate() {
        let name = gen_name(i);
        let mut sections = vec![GroupWord::identity(); 2];
        let root_perm;
        if q == critical_value {
            root_perm = Perm::from_cycles(2, &[vec![0, 1]])?;
            if let Some(&cg) = gen_of_point.get(&c) {
                sections[letter_of(c, 0)? as usize] = GroupWord::single(cg);
            }
        } else {
            root_perm = Perm::identity(2);
            let preimages: Vec<usize> = (0..p.point_count())
                .filter(|&r| p.map(r) == q && gen_of_point.contains_key(&r))
                .collect();
            let mut used = BTreeSet::new();
            for (pos, &r) in preimages.iter().enumerate() {
                let letter = letter_of(r, pos as u32)?;
                if !used.insert(letter) {
                    return Err(Error::PlacementInvalid(format!(
                        "two preimages of `{}` share letter {letter}",
                        p.id(q)
                    )));
                }
                sections[letter as usize] = GroupWord::single(gen_of_point[&r]);
            }
        }
        generators.push(Generator {
            name,
            root_perm,
            sections,
        });
    }

    let spec = GroupSpec::new(2, generators)?;

    let report = spec.validate();
    if !report.all_pass() {
        return Err(Error::KneadingValidationFailed(
            report.diagnostics.join("; "),
        ));
    }
    // The product of the generators must be a level-transitive element.
    let mut product = crate::automorphism::Automorphism::identity(2);
    for i in 0..spec.generators().len() {
        product = product.compose(&spec.generator_machine(i, limits)?, limits)?;
    }
    for n in 1..=check_depth {
        let action = product.act(n, limits)?;
        if action.cycles().first().map_or(0, Vec::len) != crate::tree::point_count(2, n)? {
            return Err(Error::KneadingValidationFailed(format!(
                "generator product is not transitive at level {n}"
            )));
        }
    }
    Ok(spec)
}

fn gen_name(i: usize) -> String {
    // a, b, ..., z, g26, g27, ...
    if i < 26 {
        let c = (b'a' + i as u8) as char;
        // `e` is reserved by the .grp grammar; fall back to a numbered name.
        if c == 'e' {
            return String::from("g4");
        }
        let mut s = String::new();
        s.push(c);
        s
    } else {
        format!("g{i}")
    }
}

/// All abstract quadratic portrait shapes with at most `max_finite`
/// finite post-critical points: one periodic shape per period, and one
/// preperiodic shape per tail/cycle split.
pub fn quadratic_portrait_corpus(max_finite: usize) -> Vec<PostCriticalPortrait> {
    let mut out = Vec::new();
    for m in 1..=max_finite {
        // Periodic of period m: the critical point sits on the cycle.
        {
            let ids: Vec<String> = (1..=m).map(|i| format!("p{i}")).collect();
            let mut raw = RawPortrait {
                degree: 2,
                points: ids.clone().into_iter().chain([String::from(INFINITY_ID)]).collect(),
                infinity: String::from(INFINITY_ID),
                map: BTreeMap::new(),
                local_degree: BTreeMap::new(),
            };
            for i in 1..=m {
                raw.map
                    .insert(format!("p{i}"), format!("p{}", if i == m { 1 } else { i + 1 }));
                raw.local_degree
                    .insert(format!("p{i}"), if i == m { 2 } else { 1 });
            }
            raw.map.insert(String::from(INFINITY_ID), String::from(INFINITY_ID));
            raw.local_degree.insert(String::from(INFINITY_ID), 2);
            out.push(validate_portrait(&raw).expect("corpus portrait is valid"));
        }
        // Preperiodic with tail ell >= 1 and cycle k, ell + k = m; the
        // critical point is strictly pre-periodic and not post-critical.
        for ell in 1..m {
            let mut raw = RawPortrait {
                degree: 2,
                points: [String::from("c")]
                    .into_iter()
                    .chain((1..=m).map(|i| format!("p{i}")))
                    .chain([String::from(INFINITY_ID)])
                    .collect(),
                infinity: String::from(INFINITY_ID),
                map: BTreeMap::new(),
                local_degree: BTreeMap::new(),
            };
            raw.map.insert(String::from("c"), String::from("p1"));
            raw.local_degree.insert(String::from("c"), 2);
            for i in 1..=m {
                let target = if i == m { ell + 1 } else { i + 1 };
                raw.map.insert(format!("p{i}"), format!("p{target}"));
                raw.local_degree.insert(format!("p{i}"), 1);
            }
            raw.map.insert(String::from(INFINITY_ID), String::from(INFINITY_ID));
            raw.local_degree.insert(String::from(INFINITY_ID), 2);
            out.push(validate_portrait(&raw).expect("corpus portrait is valid"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn power_raw() -> RawPortrait {
        RawPortrait {
            degree: 2,
            points: vec![String::from("0"), String::from("inf")],
            infinity: String::from("inf"),
            map: [("0", "0"), ("inf", "inf")]
                .into_iter()
                .map(|(a, b)| (String::from(a), String::from(b)))
                .collect(),
            local_degree: [("0", 2), ("inf", 2)]
                .into_iter()
                .map(|(a, b)| (String::from(a), b))
                .collect(),
        }
    }

    pub(crate) fn basilica_raw() -> RawPortrait {
        RawPortrait {
            degree: 2,
            points: ["0", "-1", "inf"].iter().map(|s| String::from(*s)).collect(),
            infinity: String::from("inf"),
            map: [("0", "-1"), ("-1", "0"), ("inf", "inf")]
                .into_iter()
                .map(|(a, b)| (String::from(a), String::from(b)))
                .collect(),
            local_degree: [("0", 2), ("-1", 1), ("inf", 2)]
                .into_iter()
                .map(|(a, b)| (String::from(a), b))
                .collect(),
        }
    }

    pub(crate) fn chebyshev_raw() -> RawPortrait {
        RawPortrait {
            degree: 2,
            points: ["0", "-1", "1", "inf"].iter().map(|s| String::from(*s)).collect(),
            infinity: String::from("inf"),
            map: [("0", "-1"), ("-1", "1"), ("1", "1"), ("inf", "inf")]
                .into_iter()
                .map(|(a, b)| (String::from(a), String::from(b)))
                .collect(),
            local_degree: [("0", 2), ("-1", 1), ("1", 1), ("inf", 2)]
                .into_iter()
                .map(|(a, b)| (String::from(a), b))
                .collect(),
        }
    }

    fn chi_of(raw: &RawPortrait) -> BigRational {
        orbifold(&validate_portrait(raw).unwrap()).chi
    }

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn validation_examples() {
        assert!(validate_portrait(&power_raw()).is_ok());

        let mut two_critical = basilica_raw();
        two_critical.local_degree.insert(String::from("-1"), 2);
        assert!(matches!(
            validate_portrait(&two_critical),
            Err(Error::RamificationBudgetViolated { got: 2, limit: 1 })
        ));

        let mut no_inf = power_raw();
        no_inf.points.retain(|p| p != "inf");
        no_inf.map.remove("inf");
        no_inf.local_degree.remove("inf");
        assert!(matches!(validate_portrait(&no_inf), Err(Error::MissingInfinity(_))));

        let mut partial = power_raw();
        partial.map.remove("0");
        assert!(matches!(validate_portrait(&partial), Err(Error::UnreachableCycle(_))));
    }

    #[test]
    fn post_critical_sets() {
        let p = validate_portrait(&basilica_raw()).unwrap();
        let pcs = post_critical_set(&p);
        let names: Vec<&str> = pcs.iter().map(|&q| p.id(q)).collect();
        assert_eq!(names, vec!["0", "-1", "inf"]);

        let p = validate_portrait(&power_raw()).unwrap();
        assert_eq!(post_critical_set(&p).len(), 2);

        // 0 is critical but not post-critical for the preperiodic portrait.
        let p = validate_portrait(&chebyshev_raw()).unwrap();
        let pcs = post_critical_set(&p);
        assert!(!pcs.contains(&p.index_of("0").unwrap()));
        assert_eq!(pcs.len(), 3);
    }

    #[test]
    fn orbifold_signatures() {
        let power = validate_portrait(&power_raw()).unwrap();
        let sig = orbifold(&power);
        assert!(sig.chi.is_zero());
        assert_eq!(sig.cls, OrbifoldClass::Euclidean);
        assert!(sig.nu.values().all(|w| *w == Weight::Infinite));

        let cheb = validate_portrait(&chebyshev_raw()).unwrap();
        let sig = orbifold(&cheb);
        assert!(sig.chi.is_zero());
        let minus_one = cheb.index_of("-1").unwrap();
        let one = cheb.index_of("1").unwrap();
        assert_eq!(sig.nu[&minus_one], Weight::Finite(BigUint::from(2u32)));
        assert_eq!(sig.nu[&one], Weight::Finite(BigUint::from(2u32)));

        let bas = validate_portrait(&basilica_raw()).unwrap();
        let sig = orbifold(&bas);
        assert_eq!(sig.chi, rational(-1, 1));
        assert_eq!(sig.cls, OrbifoldClass::Hyperbolic);
    }

    #[test]
    fn exceptional_sets() {
        let power = validate_portrait(&power_raw()).unwrap();
        let exc = maximal_exceptional_set(&power);
        let names: Vec<&str> = exc.maximal.iter().map(|&q| power.id(q)).collect();
        assert_eq!(names, vec!["0", "inf"]);

        // The periodic portrait of period two keeps only infinity.
        let bas = validate_portrait(&basilica_raw()).unwrap();
        let exc = maximal_exceptional_set(&bas);
        assert!(exc.maximal_finite(&bas).is_empty());
        assert!(exc.maximal.contains(&bas.infinity()));

        let cheb = validate_portrait(&chebyshev_raw()).unwrap();
        let exc = maximal_exceptional_set(&cheb);
        let finite = exc.maximal_finite(&cheb);
        assert_eq!(finite.len(), 2);
        let names: Vec<&str> = finite.iter().map(|&q| cheb.id(q)).collect();
        assert_eq!(names, vec!["-1", "1"]);

        // Unions of exceptional sets are exceptional.
        for a in &exc.all_exceptional {
            for b in &exc.all_exceptional {
                let union: BTreeSet<usize> = a.union(b).copied().collect();
                assert!(exc.all_exceptional.contains(&union));
            }
        }
    }

    #[test]
    fn orbit_types() {
        let power = validate_portrait(&power_raw()).unwrap();
        assert_eq!(critical_orbit_type(&power).unwrap(), OrbitType::Periodic(1));
        let bas = validate_portrait(&basilica_raw()).unwrap();
        assert_eq!(critical_orbit_type(&bas).unwrap(), OrbitType::Periodic(2));
        let cheb = validate_portrait(&chebyshev_raw()).unwrap();
        assert_eq!(
            critical_orbit_type(&cheb).unwrap(),
            OrbitType::Preperiodic(2, 1)
        );
    }

    #[test]
    fn recursion_builder_outputs() {
        let limits = Limits::default();
        let power = validate_portrait(&power_raw()).unwrap();
        let spec = build_img(&power, None, 8, &limits).unwrap();
        assert_eq!(spec.to_text(), "alphabet 2\ngen a = (0 1) (a, 1)\n");

        let bas = validate_portrait(&basilica_raw()).unwrap();
        let spec = build_img(&bas, None, 8, &limits).unwrap();
        assert_eq!(
            spec.to_text(),
            "alphabet 2\ngen a = (0 1) (b, 1)\ngen b = e (a, 1)\n"
        );

        let cheb = validate_portrait(&chebyshev_raw()).unwrap();
        let spec = build_img(&cheb, None, 8, &limits).unwrap();
        assert_eq!(
            spec.to_text(),
            "alphabet 2\ngen a = (0 1)\ngen b = e (a, b)\n"
        );
    }

    #[test]
    fn corpus_has_all_shapes() {
        let corpus = quadratic_portrait_corpus(6);
        assert_eq!(corpus.len(), 21);
        for p in &corpus {
            assert!(post_critical_set(p).contains(&p.infinity()));
            critical_orbit_type(p).unwrap();
        }
    }
}
