use std::path::Path;

use selfsim_core::dynamics::{build_img, Placement};
use selfsim_core::Error;

use crate::Ctx;

pub fn run(
    ctx: &Ctx,
    path: &Path,
    placement: Option<&str>,
    check_depth: u32,
    out: Option<&Path>,
) -> Result<u8, Error> {
    let (portrait, _) = crate::portrait::load(path)?;
    let placement = placement.map(parse_placement).transpose()?;
    let spec = match build_img(&portrait, placement.as_ref(), check_depth, &ctx.limits) {
        Ok(spec) => spec,
        Err(err @ Error::KneadingValidationFailed(_)) => {
            eprintln!("error: {err}");
            return Ok(1);
        }
        Err(err) => return Err(err),
    };
    let text = spec.to_text();
    match out {
        Some(out) => std::fs::write(out, &text)
            .map_err(|e| Error::InvalidSpec(format!("cannot write {}: {e}", out.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

/// "id=letter,id=letter", e.g. "0=1" to put the critical section at 1.
fn parse_placement(text: &str) -> Result<Placement, Error> {
    let mut out = Placement::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let Some((id, letter)) = part.split_once('=') else {
            return Err(Error::PlacementInvalid(format!("`{part}` is not id=letter")));
        };
        let letter: u32 = letter
            .trim()
            .parse()
            .map_err(|_| Error::PlacementInvalid(format!("`{letter}` is not a letter")))?;
        out.insert(id.trim().to_string(), letter);
    }
    Ok(out)
}
