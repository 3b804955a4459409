//! Computing with groups acting on regular rooted trees.
//!
//! The crate represents tree automorphisms as finite-state machines
//! (wreath recursions), parses and validates group definition files,
//! classifies post-critical portraits of quadratic polynomials by their
//! orbifold, and performs exact computations in finite level quotients
//! through deterministic stabilizer chains.
//!
//! The core is `no_std` + `alloc`; file IO, JSON and the command line
//! front end live in the companion `selfsim-cli` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod automorphism;
pub mod dynamics;
pub mod error;
pub mod group;
pub mod limits;
pub mod perm;
pub mod quotient;
pub mod tree;

pub use automorphism::{Automorphism, ElementOrder};
pub use error::{Error, Result};
pub use group::{CycleDiagram, GroupSpec, GroupWord, ValidationReport};
pub use limits::Limits;
pub use perm::Perm;
pub use tree::Vertex;
