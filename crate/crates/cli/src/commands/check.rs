use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim_core::analysis::{
    lemma_rist_closure_check, torsion_retract_witness, RistClosureOutcome,
};
use selfsim_core::automorphism::evaluate;
use selfsim_core::group::{GroupWord, Term};
use selfsim_core::quotient::level_quotient;
use selfsim_core::{Error, GroupSpec, Limits, Perm};
use serde_json::json;

use crate::output::print_json;
use crate::{Ctx, Lemma};

pub fn run(
    ctx: &Ctx,
    path: &Path,
    lemma: Lemma,
    level: u32,
    prime: u64,
    element: Option<&str>,
    count: usize,
) -> Result<u8, Error> {
    let (spec, input_sha256) = super::load_spec(path)?;
    let q = level_quotient(&spec, level, &ctx.limits)?;
    let mut assertions: Vec<serde_json::Value> = Vec::new();
    let mut all_pass = true;
    let body: serde_json::Value;

    match lemma {
        Lemma::RistClosure => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut instances = Vec::new();
            for i in 0..count.max(1) {
                let (word, perm) = match element {
                    Some(expr) if i == 0 => {
                        let w = spec.parse_word(expr)?;
                        let p = evaluate(&spec, &w, &ctx.limits)?.act(level, &ctx.limits)?;
                        (w, p)
                    }
                    _ => sample_nontrivial(&spec, level, &ctx.limits, &mut rng)?,
                };
                let outcome = lemma_rist_closure_check(&q, &perm)?;
                let pass = outcome.passed();
                all_pass &= pass;
                let detail = match &outcome {
                    RistClosureOutcome::Pass {
                        moved_vertices,
                        checked_elements,
                    } => format!("{moved_vertices} moved vertices, {checked_elements} containments"),
                    RistClosureOutcome::Fail(w) => format!(
                        "containment fails at vertex {} translate {}",
                        w.vertex.to_string(spec.arity()),
                        w.translate.to_string(spec.arity())
                    ),
                };
                assertions.push(json!({
                    "name": format!("closure_contains_rigid_derived_{i}"),
                    "pass": pass,
                    "details": detail,
                }));
                instances.push(json!({
                    "element": spec.format_word(&word),
                    "pass": pass,
                }));
            }
            body = json!({ "instances": instances });
        }
        Lemma::TorsionWitness => {
            let g = match element {
                Some(expr) => {
                    let w = spec.parse_word(expr)?;
                    evaluate(&spec, &w, &ctx.limits)?.act(level, &ctx.limits)?
                }
                None => pick_element_of_order(&spec, &q.gens(), prime)?,
            };
            let report = torsion_retract_witness(&q, &g, prime)?;
            for a in &report.assertions {
                all_pass &= a.pass;
                assertions.push(json!({
                    "name": a.name,
                    "pass": a.pass,
                    "details": a.details,
                }));
            }
            body = json!({
                "vertex": report.vertex.to_string(spec.arity()),
                "orbit": report
                    .orbit
                    .iter()
                    .map(|v| v.to_string(spec.arity()))
                    .collect::<Vec<_>>(),
                "rist_order": report.rist_order.to_string(),
                "h_order": report.h_order.to_string(),
                "a_order": report.a_order.to_string(),
                "degenerate": report.degenerate,
            });
        }
    }

    print_json(&json!({
        "tool": "selfsim",
        "version": env!("CARGO_PKG_VERSION"),
        "input_sha256": input_sha256,
        "lemma": match lemma {
            Lemma::RistClosure => "rist-closure",
            Lemma::TorsionWitness => "torsion-witness",
        },
        "level": level,
        "seed": ctx.seed,
        "witness": body,
        "assertions": assertions,
    }));
    Ok(if all_pass { 0 } else { 1 })
}

/// Seeded random word whose level image is non-trivial.
pub fn sample_nontrivial(
    spec: &GroupSpec,
    level: u32,
    limits: &Limits,
    rng: &mut ChaCha8Rng,
) -> Result<(GroupWord, Perm), Error> {
    let gens = spec.generators().len();
    loop {
        let len = rng.gen_range(1..=6);
        let terms: Vec<Term> = (0..len)
            .map(|_| Term {
                gen: rng.gen_range(0..gens),
                exp: if rng.gen_bool(0.5) { 1 } else { -1 },
            })
            .collect();
        let word = GroupWord::new(terms);
        let perm = evaluate(spec, &word, limits)?.act(level, limits)?;
        if !perm.is_identity() {
            return Ok((word, perm));
        }
    }
}

/// First generator product of order exactly `p`, searching single
/// generators first.
fn pick_element_of_order(spec: &GroupSpec, gens: &[Perm], p: u64) -> Result<Perm, Error> {
    use num_bigint::BigUint;
    let target = BigUint::from(p);
    for g in gens {
        if g.order() == target {
            return Ok(g.clone());
        }
    }
    for a in gens {
        for b in gens {
            let prod = a.product(b);
            if prod.order() == target {
                return Ok(prod);
            }
        }
    }
    Err(Error::OrderMismatch(format!(
        "no generator or generator pair of order {p} in the {}-generator quotient (pass --element)",
        spec.generators().len()
    )))
}
