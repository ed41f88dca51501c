pub mod arith;
pub mod error;
pub mod group;
pub mod ntheory;
pub mod padic;
pub mod perm;
pub mod presentation;
pub mod quadfield;
pub mod quandle;
pub mod rayclass;
pub mod reconstruct;
pub mod scalar;
pub mod snf;

pub use error::{Error, Result};

/// Quadratic field element with `i128` coordinates.
pub type QuadElem = quadfield::QuadElement<i128>;
/// Quadratic field element with arbitrary-precision coordinates.
pub type BigQuadElem = quadfield::QuadElement<num_bigint::BigInt>;
