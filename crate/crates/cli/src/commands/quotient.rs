use std::path::Path;

use selfsim_core::quotient::{
    hdim_point, hdim_sequence, is_level_transitive, level_quotient, HdimPoint,
};
use selfsim_core::{Error, GroupSpec, Limits, Vertex};
use serde_json::json;

use crate::output::{biguint_str, decimal9, print_json, rational_str};
use crate::{Ctx, Format};

pub struct Request {
    pub level: u32,
    pub order: bool,
    pub transitive: bool,
    pub abelianization: bool,
    pub rist: Option<String>,
    pub hdim: bool,
}

pub fn run(ctx: &Ctx, path: &Path, req: Request) -> Result<u8, Error> {
    let (spec, _) = super::load_spec(path)?;

    if req.hdim {
        let seq = hdim_parallel(&spec, req.level, &ctx.limits, ctx.threads)?;
        match ctx.format_or_csv() {
            Format::Json => {
                let rows: Vec<serde_json::Value> = seq
                    .iter()
                    .map(|p| {
                        json!({
                            "n": p.n,
                            "eta": rational_str(&p.eta),
                            "decimal": decimal9(&p.eta),
                        })
                    })
                    .collect();
                print_json(&json!(rows));
            }
            _ => {
                for p in &seq {
                    println!("{}, {}, {}", p.n, rational_str(&p.eta), decimal9(&p.eta));
                }
            }
        }
        return Ok(0);
    }

    let mut body = serde_json::Map::new();
    body.insert("level".into(), json!(req.level));
    let mut negative = false;

    // Transitivity needs no stabilizer chain; skip the quotient if it is
    // the only request.
    if req.transitive {
        let transitive = is_level_transitive(&spec, req.level, &ctx.limits)?;
        negative |= !transitive;
        body.insert("transitive".into(), json!(transitive));
    }

    if req.order || req.abelianization || req.rist.is_some() {
        let q = level_quotient(&spec, req.level, &ctx.limits)?;
        if req.order {
            body.insert("order".into(), json!(biguint_str(&q.order())));
        }
        if req.abelianization {
            let ab = q.abelianization();
            body.insert(
                "abelianization".into(),
                json!({
                    "order": biguint_str(&ab.order),
                    "derived_order": biguint_str(&ab.derived_order),
                    "gen_orders": ab.gen_orders,
                }),
            );
        }
        if let Some(vtext) = &req.rist {
            let v = Vertex::parse(vtext, spec.arity())?;
            let rist = q.rigid_stabilizer(&v)?;
            body.insert(
                "rist".into(),
                json!({
                    "vertex": v.to_string(spec.arity()),
                    "order": biguint_str(&rist.order()),
                    "index": biguint_str(&(q.order() / rist.order())),
                    "derived_nontrivial": !rist.derived_subgroup().is_trivial(),
                }),
            );
        }
    }

    match ctx.format_or_json() {
        Format::Text => {
            for (k, v) in &body {
                println!("{k}: {v}");
            }
        }
        _ => print_json(&serde_json::Value::Object(body)),
    }
    Ok(if negative { 1 } else { 0 })
}

/// Levels are independent; with more than one thread they are computed
/// in parallel and reassembled in order.
fn hdim_parallel(
    spec: &GroupSpec,
    n_max: u32,
    limits: &Limits,
    threads: usize,
) -> Result<Vec<HdimPoint>, Error> {
    if threads <= 1 || n_max <= 1 {
        return hdim_sequence(spec, n_max, limits);
    }
    let levels: Vec<u32> = (1..=n_max).collect();
    let mut results: Vec<Option<Result<HdimPoint, Error>>> = Vec::new();
    results.resize_with(levels.len(), || None);
    std::thread::scope(|scope| {
        let mut slots = results.as_mut_slice();
        for chunk in levels.chunks(levels.len().div_ceil(threads)) {
            let (head, tail) = slots.split_at_mut(chunk.len());
            slots = tail;
            scope.spawn(move || {
                for (slot, &n) in head.iter_mut().zip(chunk) {
                    *slot = Some(hdim_point(spec, n, limits));
                }
            });
        }
    });
    results
        .into_iter()
        .map(|r| r.expect("every level computed"))
        .collect()
}
