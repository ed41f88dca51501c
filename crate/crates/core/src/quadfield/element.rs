use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::IntScalar;

use super::QuadField;

/// `x + yω` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElement<T: IntScalar> {
    field: QuadField,
    x: Ratio<T>,
    y: Ratio<T>,
}

impl<T: IntScalar> QuadElement<T> {
    pub fn new(field: QuadField, x: Ratio<T>, y: Ratio<T>) -> Self {
        debug_assert!(
            !field.is_rational() || y.is_zero(),
            "element of Q with an ω coordinate"
        );
        QuadElement { field, x, y }
    }

    pub fn integral(field: QuadField, x: T, y: T) -> Self {
        Self::new(field, Ratio::from_integer(x), Ratio::from_integer(y))
    }

    pub fn from_int(field: QuadField, x: T) -> Self {
        Self::integral(field, x, T::zero())
    }

    pub fn zero(field: QuadField) -> Self {
        Self::from_int(field, T::zero())
    }

    pub fn one(field: QuadField) -> Self {
        Self::from_int(field, T::one())
    }

    pub fn omega(field: QuadField) -> Self {
        assert!(!field.is_rational(), "Q has no ω");
        Self::integral(field, T::zero(), T::one())
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn x(&self) -> &Ratio<T> {
        &self.x
    }

    pub fn y(&self) -> &Ratio<T> {
        &self.y
    }

    fn t(&self) -> Ratio<T> {
        Ratio::from_integer(T::from_small(self.field.omega_trace()))
    }

    fn n(&self) -> Ratio<T> {
        Ratio::from_integer(T::from_small(self.field.omega_norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// Integer coordinates, if the element lies in the ring of integers.
    pub fn integral_coords(&self) -> Option<(T, T)> {
        self.is_integral()
            .then(|| (self.x.to_integer(), self.y.to_integer()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        Self::new(self.field, &self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        Self::new(self.field, &self.x - &other.x, &self.y - &other.y)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, -self.x.clone(), -self.y.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x - self.n() * &yy;
        let y = &self.x * &other.y + &other.x * &self.y + self.t() * yy;
        Self::new(self.field, x, y)
    }

    pub fn scale(&self, k: &Ratio<T>) -> Self {
        Self::new(self.field, &self.x * k, &self.y * k)
    }

    pub fn scale_int(&self, k: T) -> Self {
        self.scale(&Ratio::from_integer(k))
    }

    /// Image under the non-trivial automorphism.
    pub fn conj(&self) -> Self {
        if self.field.is_rational() {
            return self.clone();
        }
        Self::new(self.field, &self.x + self.t() * &self.y, -self.y.clone())
    }

    pub fn norm(&self) -> Ratio<T> {
        if self.field.is_rational() {
            return self.x.clone();
        }
        &self.x * &self.x + self.t() * &self.x * &self.y + self.n() * &self.y * &self.y
    }

    pub fn trace(&self) -> Ratio<T> {
        if self.field.is_rational() {
            return self.x.clone();
        }
        Ratio::from_integer(T::from_small(2)) * &self.x + self.t() * &self.y
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.field.is_rational() {
            return Some(Self::new(self.field, self.x.recip(), Ratio::zero()));
        }
        let n = self.norm();
        Some(self.conj().scale(&n.recip()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Coordinates `(u, v)` with `self = u + v√m`.
    pub fn sqrt_coords(&self) -> (Ratio<T>, Ratio<T>) {
        if self.field.half_integral() {
            let half = Ratio::new(T::one(), T::from_small(2));
            (&self.x + &self.y * &half, &self.y * &half)
        } else {
            (self.x.clone(), self.y.clone())
        }
    }

    /// Sign at a real embedding; embedding 0 sends `√m` to the positive root.
    /// `None` for complex fields.
    pub fn sign_at(&self, embedding: usize) -> Option<i32> {
        if self.field.is_complex() {
            return None;
        }
        let (u, mut v) = self.sqrt_coords();
        if embedding == 1 {
            v = -v;
        }
        let s = |r: &Ratio<T>| -> i32 {
            if r.is_positive() {
                1
            } else if r.is_negative() {
                -1
            } else {
                0
            }
        };
        let (su, sv) = (s(&u), s(&v));
        if sv == 0 || su == sv {
            return Some(su);
        }
        if su == 0 {
            return Some(sv);
        }
        // opposite signs: compare u² with v²·m
        let m = Ratio::from_integer(T::from_small(self.field.m()));
        let d = &u * &u - &v * &v * m;
        Some(su * s(&d))
    }

    /// Positive at every real embedding; for complex fields this only asks
    /// for a non-zero element.
    pub fn is_totally_positive(&self) -> bool {
        if self.field.is_complex() {
            return !self.is_zero();
        }
        self.sign_at(0) == Some(1) && self.sign_at(1) == Some(1)
    }

    /// Value at a real embedding, as a float.
    pub fn embed_f64(&self, embedding: usize) -> Option<f64> {
        if self.field.is_complex() {
            return None;
        }
        let (u, v) = self.sqrt_coords();
        let f = |r: &Ratio<T>| {
            r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
        };
        let root = (self.field.m() as f64).sqrt();
        let sign = if embedding == 1 { -1.0 } else { 1.0 };
        Some(f(&u) + sign * f(&v) * root)
    }

    pub fn to_big(&self) -> QuadElement<BigInt> {
        let conv = |r: &Ratio<T>| Ratio::new(big(r.numer()), big(r.denom()));
        QuadElement::new(self.field, conv(&self.x), conv(&self.y))
    }
}

fn big<T: IntScalar>(v: &T) -> BigInt {
    v.to_i128()
        .map(BigInt::from)
        .unwrap_or_else(|| v.to_string().parse().expect("decimal integer"))
}

impl QuadElement<BigInt> {
    /// Narrows to `i128` coordinates when they fit.
    pub fn to_i128(&self) -> Option<QuadElement<i128>> {
        let conv = |r: &Ratio<BigInt>| Some(Ratio::new(r.numer().to_i128()?, r.denom().to_i128()?));
        Some(QuadElement::new(self.field, conv(&self.x)?, conv(&self.y)?))
    }
}

impl<T: IntScalar> fmt::Display for QuadElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (u, v) = self.sqrt_coords();
        if v.is_zero() {
            return write!(f, "{u}");
        }
        let root = format!("√{}", self.field.m());
        let coeff = if v.is_one() {
            root
        } else if v == -Ratio::one() {
            format!("-{root}")
        } else {
            format!("{v}·{root}")
        };
        if u.is_zero() {
            write!(f, "{coeff}")
        } else if coeff.starts_with('-') {
            write!(f, "{u}{coeff}")
        } else {
            write!(f, "{u}+{coeff}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: i64) -> QuadField {
        QuadField::new(m).unwrap()
    }

    #[test]
    fn norm_and_trace() {
        let k = q(5);
        // 4 + √5 = 7/2·... in the ω basis: 4 + (2ω − 1) = 3 + 2ω
        let a = QuadElement::<i128>::integral(k, 3, 2);
        assert_eq!(a.norm(), Ratio::from_integer(11));
        assert_eq!(a.trace(), Ratio::from_integer(8));
        assert_eq!(a.to_string(), "4+√5");
        assert!(a.is_totally_positive());
        let b = a.conj();
        assert_eq!(b.to_string(), "4-√5");
        assert_eq!(a.mul(&b), QuadElement::from_int(k, 11));
    }

    #[test]
    fn signs_exact() {
        let k = q(2);
        // 1 + √2 has norm −1
        let e = QuadElement::<i128>::integral(k, 1, 1);
        assert_eq!(e.sign_at(0), Some(1));
        assert_eq!(e.sign_at(1), Some(-1));
        assert!(!e.is_totally_positive());
        assert!(e.pow(2).is_totally_positive());
        // 3 − 2√2 is tiny but positive
        let s = QuadElement::<i128>::integral(k, 3, -2);
        assert_eq!(s.sign_at(0), Some(1));
        assert_eq!(s.neg().sign_at(0), Some(-1));
        assert_eq!(QuadElement::<i128>::zero(k).sign_at(0), Some(0));
    }

    #[test]
    fn inverse() {
        let k = q(-5);
        let a = QuadElement::<i128>::integral(k, 2, 1);
        let inv = a.inv().unwrap();
        assert_eq!(a.mul(&inv), QuadElement::one(k));
        assert!(!inv.is_integral());
        assert!(a.is_totally_positive());
    }

    #[test]
    fn big_roundtrip() {
        let k = q(13);
        let a = QuadElement::<i128>::new(k, Ratio::new(3, 7), Ratio::new(-5, 2));
        assert_eq!(a.to_big().to_i128().unwrap(), a);
    }
}
