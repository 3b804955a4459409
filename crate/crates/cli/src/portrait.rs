//! Portrait JSON document handling.
//!
//! Schema (unknown keys rejected):
//! `{ "degree": int, "points": [ids], "infinity": "inf",
//!    "map": {id: id}, "local_degree": {id: int} }`

use std::collections::BTreeMap;
use std::path::Path;

use selfsim_core::dynamics::{validate_portrait, PostCriticalPortrait, RawPortrait};
use selfsim_core::Error;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PortraitDoc {
    degree: u32,
    points: Vec<String>,
    infinity: String,
    map: BTreeMap<String, String>,
    local_degree: BTreeMap<String, u32>,
}

pub fn load(path: &Path) -> Result<(PostCriticalPortrait, String), Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    let doc: PortraitDoc = serde_json::from_slice(&bytes)
        .map_err(|e| Error::InvalidSpec(format!("portrait schema violation: {e}")))?;
    let raw = RawPortrait {
        degree: doc.degree,
        points: doc.points,
        infinity: doc.infinity,
        map: doc.map.into_iter().collect(),
        local_degree: doc.local_degree.into_iter().collect(),
    };
    let portrait = validate_portrait(&raw)?;
    Ok((portrait, crate::output::sha256_hex(&bytes)))
}
