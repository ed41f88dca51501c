//! Integer scalar abstraction for the generic quadratic-field arithmetic.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer type usable as coefficients of quadratic-field elements.
pub trait IntScalar:
    Integer
    + Roots
    + Signed
    + Clone
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Hash
    + Send
    + Sync
    + 'static
{
    fn from_small(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits in every scalar")
    }
}

impl IntScalar for i64 {}
impl IntScalar for i128 {}
impl IntScalar for BigInt {}
