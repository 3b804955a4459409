//! Rendering helpers: exact rationals, big integers, hashes.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use sha2::{Digest, Sha256};

/// Exact fraction string: "0", "-1", "-1/2", "3/7".
pub fn rational_str(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nine decimal places, rounded half up. Values here are non-negative.
pub fn decimal9(r: &BigRational) -> String {
    assert!(!r.is_negative());
    let scale = BigInt::from(1_000_000_000i64);
    let scaled = (r.numer() * &scale * 2 + r.denom()) / (r.denom() * 2);
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    format!("{int}.{frac:09}")
}

pub fn biguint_str(x: &BigUint) -> String {
    x.to_string()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid json"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn decimal_rendering_rounds_half_up() {
        let r = BigRational::new(BigInt::from(3), BigInt::from(7));
        assert_eq!(decimal9(&r), "0.428571429");
        let r = BigRational::new(BigInt::from(1), BigInt::from(1));
        assert_eq!(decimal9(&r), "1.000000000");
        let r = BigRational::new(BigInt::from(0), BigInt::from(1));
        assert_eq!(decimal9(&r), "0.000000000");
    }

    #[test]
    fn fraction_strings() {
        assert_eq!(rational_str(&BigRational::new(BigInt::from(-1), BigInt::from(2))), "-1/2");
        assert_eq!(rational_str(&BigRational::from_integer(BigInt::from(0))), "0");
    }
}
