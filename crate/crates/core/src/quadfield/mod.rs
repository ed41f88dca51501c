//! Arithmetic of Q and of quadratic fields: elements, ideals in Hermite
//! normal form, binary quadratic forms, narrow class groups and units.

mod element;
mod forms;
mod ideal;
mod json;
mod units;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::is_squarefree;

pub use element::QuadElement;
pub use forms::{
    narrow_class_group, BinaryForm, Mat2, NarrowClassGroup, OrientedLattice, DEFAULT_DISC_BOUND,
};
pub use ideal::{
    multiplicative_independence, split_prime, PrimeAbove, QuadIdeal, SplitKind, Splitting,
};
pub use json::{FieldJson, IdealJson};
pub use units::{
    fundamental_unit, ideal_power_class_exponent, principal_generator, totally_positive_generator,
    totally_positive_units,
};

/// `Q(√m)` for squarefree `m ≠ 0, 1`, or `Q` itself (stored as `m = 1`).
///
/// The ring of integers is `Z[ω]` with `ω = √m`, or `ω = (1+√m)/2` when
/// `m ≡ 1 mod 4`. For `Q` the second coordinate of every element is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self> {
        if m == 0 || m == 1 || !is_squarefree(m) {
            return Err(Error::InvalidField(format!(
                "m = {m} must be squarefree and different from 0, 1"
            )));
        }
        Ok(QuadField { m })
    }

    pub fn rational() -> Self {
        QuadField { m: 1 }
    }

    pub fn gaussian() -> Self {
        QuadField { m: -1 }
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn degree(&self) -> u32 {
        if self.is_rational() {
            1
        } else {
            2
        }
    }

    /// Field discriminant; 1 for `Q`.
    pub fn disc(&self) -> i64 {
        if self.is_rational() {
            1
        } else if self.m.rem_euclid(4) == 1 {
            self.m
        } else {
            4 * self.m
        }
    }

    /// `ω = (1+√m)/2`?
    pub fn half_integral(&self) -> bool {
        !self.is_rational() && self.m.rem_euclid(4) == 1
    }

    /// Trace `t` of ω, so that `ω² = tω − n`.
    pub fn omega_trace(&self) -> i64 {
        if self.half_integral() {
            1
        } else {
            0
        }
    }

    /// Norm `n` of ω, so that `ω² = tω − n`.
    pub fn omega_norm(&self) -> i64 {
        if self.is_rational() {
            0
        } else if self.half_integral() {
            (1 - self.m) / 4
        } else {
            -self.m
        }
    }

    /// `Q` or a real quadratic field.
    pub fn is_real(&self) -> bool {
        self.m > 0
    }

    pub fn is_complex(&self) -> bool {
        self.m < 0
    }

    /// Number of real places.
    pub fn real_places(&self) -> u32 {
        if self.is_rational() {
            1
        } else if self.is_real() {
            2
        } else {
            0
        }
    }

    /// Number of roots of unity in the field.
    pub fn roots_of_unity(&self) -> u32 {
        match self.m {
            -1 => 4,
            -3 => 6,
            _ => 2,
        }
    }
}

impl std::fmt::Display for QuadField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            write!(f, "Q")
        } else {
            write!(f, "Q(√{})", self.m)
        }
    }
}
