use std::path::Path;

use selfsim_core::automorphism::{evaluate, ElementOrder};
use selfsim_core::Error;
use serde_json::json;

use crate::output::print_json;
use crate::{Ctx, Format};

pub fn run(
    ctx: &Ctx,
    path: &Path,
    expr: &str,
    is_identity: bool,
    order_bound: Option<u64>,
    order_level: u32,
) -> Result<u8, Error> {
    let (spec, _) = super::load_spec(path)?;
    let word = spec.parse_word(expr)?;
    let machine = evaluate(&spec, &word, &ctx.limits)?;

    let mut body = serde_json::Map::new();
    body.insert("expr".into(), json!(spec.format_word(&word)));
    body.insert("states".into(), json!(machine.state_count()));
    let mut negative = false;

    if is_identity {
        let trivial = machine.is_identity();
        negative |= !trivial;
        body.insert("is_identity".into(), json!(trivial));
    }
    if let Some(bound) = order_bound {
        let order = machine.order_bounded(order_level, bound, &ctx.limits)?;
        let value = match order {
            ElementOrder::Finite(m) => json!({ "finite": m }),
            ElementOrder::AtLeast(k) => json!({ "at_least": k.to_string() }),
        };
        body.insert("order".into(), value);
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
