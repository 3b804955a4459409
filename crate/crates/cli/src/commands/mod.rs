pub mod check;
pub mod dot;
pub mod img;
pub mod orbifold;
pub mod quotient;
pub mod validate;
pub mod word;

use std::path::Path;

use selfsim_core::{Error, GroupSpec};

/// Reads and parses a .grp file, returning the spec and the input hash.
pub fn load_spec(path: &Path) -> Result<(GroupSpec, String), Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::InvalidSpec(format!("{} is not UTF-8", path.display())))?;
    let spec = GroupSpec::parse(&text)?;
    Ok((spec, crate::output::sha256_hex(&bytes)))
}
