//! Verdicts and finite-depth witnesses.
//!
//! The classifier maps a quadratic portrait's orbifold class to a
//! retraction-property prediction; the remaining operations assemble
//! finite-quotient evidence: rigid-stabilizer growth, normal-closure
//! containment of rigid derived subgroups, and the torsion retract
//! construction (a vertex orbit, a diagonal subgroup and its semidirect
//! closure), with every claimed identity asserted on the computed
//! objects.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::automorphism::Automorphism;
use crate::dynamics::{self, OrbifoldClass, OrbitType, PostCriticalPortrait};
use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupWord, Term};
use crate::limits::Limits;
use crate::perm::Perm;
use crate::quotient::{LevelQuotient, Subgroup};
use crate::tree::{self, Vertex};

/// Prediction of the local retraction property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LrPrediction {
    HasLr,
    NotLr,
}

impl LrPrediction {
    pub fn as_str(&self) -> &'static str {
        match self {
            LrPrediction::HasLr => "HasLR",
            LrPrediction::NotLr => "NotLR",
        }
    }
}

/// Classifier verdict for a quadratic portrait.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LrVerdict {
    pub prediction: LrPrediction,
    pub basis: OrbifoldClass,
    pub orbit_type: OrbitType,
    pub notes: String,
}

/// Predicts the retraction property from the orbifold class.
///
/// The prediction is a pure lookup: the tree action of a quadratic
/// portrait has the property exactly when the orbifold is euclidean,
/// which happens for the fixed critical point (powering map) and the
/// tail-two, cycle-one shape (Chebyshev). No group computation is
/// involved; quotient evidence never overrides this.
pub fn predict_lr(p: &PostCriticalPortrait) -> Result<LrVerdict> {
    let orbit_type = dynamics::critical_orbit_type(p)?;
    let sig = dynamics::orbifold(p);
    let prediction = match sig.cls {
        OrbifoldClass::Euclidean => LrPrediction::HasLr,
        _ => LrPrediction::NotLr,
    };
    let notes = match (sig.cls, orbit_type) {
        (OrbifoldClass::Euclidean, OrbitType::Periodic(1)) => {
            String::from("euclidean; model map: powering map z^2, group Z")
        }
        (OrbifoldClass::Euclidean, OrbitType::Preperiodic(2, 1)) => {
            String::from("euclidean; model map: Chebyshev 2z^2-1, group D_inf")
        }
        (OrbifoldClass::Euclidean, _) => String::from("euclidean"),
        (OrbifoldClass::Hyperbolic, _) => {
            String::from("hyperbolic orbifold; the group is (weakly) branch-like, no retraction property")
        }
        (OrbifoldClass::Spherical, _) => {
            String::from("spherical orbifold; outside the polynomial classification")
        }
    };
    Ok(LrVerdict {
        prediction,
        basis: sig.cls,
        orbit_type,
        notes,
    })
}

/// Rigid-stabilizer data for one tree level inside a fixed quotient.
#[derive(Clone, Debug)]
pub struct BranchLevelRow {
    pub level: u32,
    /// Orders of the rigid stabilizers at the level's vertices, in
    /// lexicographic vertex order.
    pub vertex_orders: Vec<BigUint>,
    /// Index of the product of the rigid stabilizers in the quotient.
    pub product_index: BigUint,
    /// Whether each rigid stabilizer has a non-trivial derived subgroup.
    pub derived_nontrivial: Vec<bool>,
}

/// Finite-depth branch evidence: rigid stabilizer growth per level.
#[derive(Clone, Debug)]
pub struct BranchEvidence {
    pub quotient_level: u32,
    pub group_order: BigUint,
    pub rows: Vec<BranchLevelRow>,
}

/// Computes rigid-stabilizer orders, product indices and derived
/// non-triviality for every level up to `k_max` inside the level-`n`
/// quotient.
pub fn branch_evidence(
    spec: &GroupSpec,
    k_max: u32,
    n: u32,
    limits: &Limits,
) -> Result<BranchEvidence> {
    if k_max >= n {
        return Err(Error::LevelTooLarge {
            requested: k_max,
            max: n.saturating_sub(1),
        });
    }
    let q = crate::quotient::level_quotient(spec, n, limits)?;
    let d = spec.arity();
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let mut vertex_orders = Vec::new();
        let mut derived_nontrivial = Vec::new();
        let mut product_gens: Vec<Perm> = Vec::new();
        for idx in 0..tree::point_count(d, k)? {
            let v = Vertex::new(tree::word_of_index(idx, d, k));
            let rist = q.rigid_stabilizer(&v)?;
            vertex_orders.push(rist.order());
            derived_nontrivial.push(!rist.derived_subgroup().is_trivial());
            product_gens.extend(rist.gens().iter().cloned());
        }
        let product = Subgroup::generated(product_gens, q.degree(), &[]);
        rows.push(BranchLevelRow {
            level: k,
            vertex_orders,
            product_index: q.order() / product.order(),
            derived_nontrivial,
        });
    }
    Ok(BranchEvidence {
        quotient_level: n,
        group_order: q.order(),
        rows,
    })
}

/// A failed containment in [`lemma_rist_closure_check`]: the offending
/// vertex, its translate and the element that escaped the closure.
#[derive(Clone, Debug)]
pub struct RistClosureWitness {
    pub vertex: Vertex,
    pub translate: Vertex,
    pub element: Perm,
}

/// Outcome of the normal-closure containment check.
#[derive(Clone, Debug)]
pub enum RistClosureOutcome {
    Pass {
        moved_vertices: usize,
        checked_elements: usize,
    },
    Fail(RistClosureWitness),
}

impl RistClosureOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, RistClosureOutcome::Pass { .. })
    }
}

/// Verifies, inside a finite quotient, that the normal closure of `x`
/// contains the derived subgroup of every rigid stabilizer at every
/// translate of every vertex moved by the closure.
///
/// This containment is a theorem for any group acting on the truncated
/// tree, so a failure certifies an implementation bug; the witness is
/// returned for debugging.
pub fn lemma_rist_closure_check(q: &LevelQuotient, x: &Perm) -> Result<RistClosureOutcome> {
    if x.is_identity() {
        return Err(Error::TrivialElement);
    }
    if !q.contains(x) {
        return Err(Error::NotAMember);
    }
    let closure = q.normal_closure(core::slice::from_ref(x))?;
    let d = q.arity();
    let mut moved_vertices = 0usize;
    let mut checked_elements = 0usize;

    for k in 1..q.level() {
        let mut handled: BTreeSet<usize> = BTreeSet::new();
        for idx in 0..tree::point_count(d, k)? {
            if handled.contains(&idx) {
                continue;
            }
            let v = Vertex::new(tree::word_of_index(idx, d, k));
            let moved = closure
                .gens()
                .iter()
                .map(|g| q.moves_vertex(g, &v))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .any(|m| m);
            if !moved {
                continue;
            }
            moved_vertices += 1;
            // Orbit of the vertex under the ambient group, with transversal
            // elements; rigid stabilizers at translates are conjugates.
            let (orbit, reps) = vertex_orbit(q, &v)?;
            handled.extend(orbit.iter().map(|u| tree::index_of_word(u.letters(), d)));
            let derived = q.rigid_stabilizer(&v)?.derived_subgroup();
            for (u, rep) in orbit.iter().zip(&reps) {
                for gen in derived.gens() {
                    checked_elements += 1;
                    let translated = gen.conjugate(rep);
                    if !closure.contains(&translated) {
                        return Ok(RistClosureOutcome::Fail(RistClosureWitness {
                            vertex: v.clone(),
                            translate: u.clone(),
                            element: translated,
                        }));
                    }
                }
            }
        }
    }
    Ok(RistClosureOutcome::Pass {
        moved_vertices,
        checked_elements,
    })
}

/// Orbit of a vertex under the quotient's generators, with one
/// transversal element per orbit vertex (mapping the seed onto it).
fn vertex_orbit(q: &LevelQuotient, v: &Vertex) -> Result<(Vec<Vertex>, Vec<Perm>)> {
    let d = q.arity();
    let n = q.level();
    let block = |p: &Perm, v: &Vertex| -> Result<Vertex> {
        let range = tree::subtree_range(v, d, n)?;
        let image_start = p.apply(range.start as u32) as usize;
        let width = range.len();
        Ok(Vertex::new(tree::word_of_index(
            image_start / width,
            d,
            v.len() as u32,
        )))
    };
    let mut orbit = alloc::vec![v.clone()];
    let mut reps = alloc::vec![Perm::identity(q.degree())];
    let mut seen: BTreeSet<Vertex> = orbit.iter().cloned().collect();
    let mut i = 0;
    while i < orbit.len() {
        let u = orbit[i].clone();
        let rep = reps[i].clone();
        for g in q.gens() {
            let image = block(g, &u)?;
            if seen.insert(image.clone()) {
                orbit.push(image);
                reps.push(rep.product(g));
            }
        }
        i += 1;
    }
    Ok((orbit, reps))
}

/// One named assertion inside a witness report.
#[derive(Clone, Debug)]
pub struct Assertion {
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
}

/// Report of the torsion retract construction.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// The chosen vertex with a g-orbit of length `p`.
    pub vertex: Vertex,
    pub orbit: Vec<Vertex>,
    pub rist_order: BigUint,
    pub h_order: BigUint,
    pub a_order: BigUint,
    /// Set when the rigid stabilizer at the vertex is trivial, so the
    /// report carries no content.
    pub degenerate: bool,
    pub assertions: Vec<Assertion>,
}

impl WitnessReport {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }
}

/// Runs the torsion retract construction inside a finite quotient.
///
/// For an element `g` of prime order `p`, picks a vertex whose g-orbit
/// has length exactly `p` (preferring one with a non-trivial rigid
/// stabilizer), maps the rigid stabilizer diagonally along the orbit,
/// and checks the facts the construction rests on: the diagonal image
/// `H` is isomorphic to the rigid stabilizer, meets it trivially, is
/// normalized by `g`, and `A = <H, g>` has order `p * |H|`.
pub fn torsion_retract_witness(q: &LevelQuotient, g: &Perm, p: u64) -> Result<WitnessReport> {
    if !q.contains(g) {
        return Err(Error::NotAMember);
    }
    if p < 2 || !is_prime(p) {
        return Err(Error::OrderMismatch(format!("{p} is not a prime")));
    }
    let order = g.order();
    if order != BigUint::from(p) {
        return Err(Error::OrderMismatch(format!(
            "element has order {order}, expected exactly {p}"
        )));
    }

    let d = q.arity();
    let mut fallback: Option<Vertex> = None;
    let mut chosen: Option<Vertex> = None;
    'levels: for k in 1..q.level() {
        for idx in 0..tree::point_count(d, k)? {
            let v = Vertex::new(tree::word_of_index(idx, d, k));
            if vertex_orbit_length(q, g, &v)? == p {
                if fallback.is_none() {
                    fallback = Some(v.clone());
                }
                if !q.rigid_stabilizer(&v)?.is_trivial() {
                    chosen = Some(v);
                    break 'levels;
                }
            }
        }
    }
    let (v, degenerate) = match (chosen, fallback) {
        (Some(v), _) => (v, false),
        (None, Some(v)) => (v, true),
        (None, None) => return Err(Error::NoSuchOrbit(p)),
    };

    let rist = q.rigid_stabilizer(&v)?;
    let mut assertions = Vec::new();

    // The g-orbit of v and the powers of g as transversal elements.
    let mut orbit = Vec::with_capacity(p as usize);
    let mut powers = Vec::with_capacity(p as usize);
    let mut u = v.clone();
    let mut acc = Perm::identity(q.degree());
    for _ in 0..p {
        orbit.push(u.clone());
        powers.push(acc.clone());
        u = block_image(q, g, &u)?;
        acc = acc.product(g);
    }

    // Distinct-orbit rigid stabilizers commute; checked, not assumed.
    let mut commute = true;
    for i in 0..orbit.len() {
        for j in (i + 1)..orbit.len() {
            for a in rist.gens() {
                for b in rist.gens() {
                    let x = a.conjugate(&powers[i]);
                    let y = b.conjugate(&powers[j]);
                    if x.product(&y) != y.product(&x) {
                        commute = false;
                    }
                }
            }
        }
    }
    assertions.push(Assertion {
        name: "orbit_rigid_stabilizers_commute",
        pass: commute,
        details: format!("{} orbit vertices", orbit.len()),
    });

    // Diagonal image of the rigid stabilizer along the orbit.
    let h_gens: Vec<Perm> = rist
        .gens()
        .iter()
        .map(|x| {
            let mut prod = Perm::identity(q.degree());
            for gp in &powers {
                prod = prod.product(&x.conjugate(gp));
            }
            prod
        })
        .collect();
    let h = Subgroup::generated(h_gens.clone(), q.degree(), &[]);

    let rist_order = rist.order();
    let h_order = h.order();
    assertions.push(Assertion {
        name: "diagonal_preserves_order",
        pass: h_order == rist_order,
        details: format!("|H| = {h_order}, |rist(v)| = {rist_order}"),
    });

    // H meets rist(v) trivially: elements of H fixing everything outside
    // the subtree of v already fix everything.
    let inside = tree::subtree_range(&v, d, q.level())?;
    let outside: Vec<u32> = (0..q.degree() as u32)
        .filter(|&pt| !inside.contains(&(pt as usize)))
        .collect();
    let meet = h.pointwise_stabilizer(&outside);
    assertions.push(Assertion {
        name: "h_meets_rist_trivially",
        pass: meet.is_trivial(),
        details: format!("|H meet rist(v)| = {}", meet.order()),
    });

    // A = <H, g> is H extended by the cyclic group of order p.
    let mut a_gens = h_gens.clone();
    a_gens.push(g.clone());
    let a = Subgroup::generated(a_gens, q.degree(), &[]);
    let a_order = a.order();
    assertions.push(Assertion {
        name: "a_order_is_p_times_h",
        pass: a_order == h_order.clone() * BigUint::from(p),
        details: format!("|A| = {a_order}, p * |H| = {}", h_order.clone() * BigUint::from(p)),
    });

    let normalized = h_gens.iter().all(|x| h.contains(&x.conjugate(g)));
    assertions.push(Assertion {
        name: "g_normalizes_h",
        pass: normalized,
        details: String::from("generator conjugates stay in H"),
    });

    let mut cyclic_meet_trivial = true;
    let mut gq = g.clone();
    for _ in 1..p {
        if h.contains(&gq) {
            cyclic_meet_trivial = false;
        }
        gq = gq.product(g);
    }
    assertions.push(Assertion {
        name: "h_meets_cyclic_trivially",
        pass: cyclic_meet_trivial,
        details: String::from("no non-trivial power of g lies in H"),
    });

    Ok(WitnessReport {
        vertex: v,
        orbit,
        rist_order,
        h_order,
        a_order,
        degenerate,
        assertions,
    })
}

fn vertex_orbit_length(q: &LevelQuotient, g: &Perm, v: &Vertex) -> Result<u64> {
    let mut len = 1u64;
    let mut u = block_image(q, g, v)?;
    while &u != v {
        len += 1;
        u = block_image(q, g, &u)?;
    }
    Ok(len)
}

fn block_image(q: &LevelQuotient, g: &Perm, v: &Vertex) -> Result<Vertex> {
    let d = q.arity();
    let range = tree::subtree_range(v, d, q.level())?;
    let width = range.len();
    let image_start = g.apply(range.start as u32) as usize;
    Ok(Vertex::new(tree::word_of_index(
        image_start / width,
        d,
        v.len() as u32,
    )))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Result of the bounded section-witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionSearch {
    /// A word fixing the vertex whose section is the target generator,
    /// certified through the word problem.
    Found(GroupWord),
    /// Inconclusive: no word within the bound. Not a refutation.
    NotFound { explored: usize },
}

/// Bounded breadth-first search for a word `w` of length at most
/// `word_bound` (over the generators and their inverses) fixing `v` with
/// `w|_v` extensionally equal to the target generator.
pub fn section_surjectivity_witness(
    spec: &GroupSpec,
    target: &str,
    v: &Vertex,
    word_bound: usize,
    limits: &Limits,
) -> Result<SectionSearch> {
    let target_idx = spec
        .generator_index(target)
        .ok_or_else(|| Error::UnknownGenerator(String::from(target)))?;
    v.check_arity(spec.arity())?;
    let target_machine = spec.generator_machine(target_idx, limits)?;
    let target_inverse = target_machine.inverse();

    let gen_machines: Vec<(i64, Automorphism)> = {
        let mut out = Vec::new();
        for i in 0..spec.generators().len() {
            let m = spec.generator_machine(i, limits)?;
            out.push(((i + 1) as i64, m.clone()));
            out.push((-((i + 1) as i64), m.inverse()));
        }
        out
    };

    let mut frontier: Vec<(Vec<i64>, Automorphism)> =
        alloc::vec![(Vec::new(), Automorphism::identity(spec.arity()))];
    let mut seen: BTreeSet<Automorphism> = frontier.iter().map(|(_, m)| m.clone()).collect();
    let mut explored = 0usize;

    for _ in 0..word_bound {
        let mut next = Vec::new();
        for (word, machine) in &frontier {
            for (signed, gm) in &gen_machines {
                if word.last() == Some(&-signed) {
                    continue;
                }
                let m = machine.compose(gm, limits)?;
                if !seen.insert(m.clone()) {
                    continue;
                }
                explored += 1;
                let mut w = word.clone();
                w.push(*signed);
                if m.apply_vertex(v)? == *v {
                    let section = m.section(v)?;
                    // Word-problem certificate: section(w, v) * target^-1 = 1.
                    if section.compose(&target_inverse, limits)?.is_identity() {
                        debug_assert_eq!(section, target_machine);
                        return Ok(SectionSearch::Found(signed_to_word(&w)));
                    }
                }
                next.push((w, m));
            }
        }
        frontier = next;
    }
    Ok(SectionSearch::NotFound { explored })
}

fn signed_to_word(signed: &[i64]) -> GroupWord {
    let mut terms: Vec<Term> = Vec::new();
    for &s in signed {
        let gen = (s.unsigned_abs() - 1) as usize;
        let exp = if s > 0 { 1 } else { -1 };
        match terms.last_mut() {
            Some(t) if t.gen == gen && (t.exp > 0) == (exp > 0) => t.exp += exp,
            _ => terms.push(Term { gen, exp }),
        }
    }
    GroupWord::new(terms)
}
