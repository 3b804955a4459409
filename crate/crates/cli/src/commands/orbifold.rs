use std::path::Path;

use selfsim_core::analysis::predict_lr;
use selfsim_core::dynamics::{
    critical_orbit_type, maximal_exceptional_set, orbifold, Weight,
};
use selfsim_core::Error;
use serde_json::json;

use crate::output::{print_json, rational_str};
use crate::Ctx;

pub fn run(_ctx: &Ctx, path: &Path) -> Result<u8, Error> {
    let (portrait, _) = crate::portrait::load(path)?;
    let sig = orbifold(&portrait);
    let exc = maximal_exceptional_set(&portrait);

    let nu: serde_json::Map<String, serde_json::Value> = sig
        .nu
        .iter()
        .map(|(&q, w)| {
            let v = match w {
                Weight::Infinite => json!("inf"),
                Weight::Finite(nu) => json!(nu.to_string()),
            };
            (portrait.id(q).to_string(), v)
        })
        .collect();

    let ids = |set: &std::collections::BTreeSet<usize>| -> Vec<String> {
        set.iter().map(|&q| portrait.id(q).to_string()).collect()
    };

    // The retraction verdict only exists for quadratic portraits.
    let (orbit_type, lr, notes) = match critical_orbit_type(&portrait) {
        Ok(ot) => {
            let verdict = predict_lr(&portrait)?;
            (
                json!(ot.to_string()),
                json!(verdict.prediction.as_str()),
                json!(verdict.notes),
            )
        }
        Err(Error::NotQuadratic(reason)) => (
            serde_json::Value::Null,
            serde_json::Value::Null,
            json!(format!("not quadratic: {reason}")),
        ),
        Err(other) => return Err(other),
    };

    print_json(&json!({
        "nu": nu,
        "chi": rational_str(&sig.chi),
        "class": sig.cls.as_str(),
        "exceptional": {
            "maximal": ids(&exc.maximal),
            "finite": ids(&exc.maximal_finite(&portrait)),
            "all": exc.all_exceptional.iter().map(|s| ids(s)).collect::<Vec<_>>(),
        },
        "orbit_type": orbit_type,
        "lr": lr,
        "notes": notes,
    }));
    Ok(0)
}
