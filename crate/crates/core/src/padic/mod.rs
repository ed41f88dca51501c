//! Truncated arithmetic in `Q_p` and in quadratic extensions `K_𝔭 / Q_p`.
//!
//! Elements are `a + b·ω` with `ω = √m`. In the unramified case `ω` is a unit
//! and `π = p`; in the ramified case `ω = π` itself. Precision and valuation
//! are counted in powers of `π`.

mod json;
mod relation;
mod series;

pub use json::LocalElementJson;
pub use relation::{qp_rank, rational_ratio, Relation};
pub use series::{
    padic_exp, padic_log, padic_log_exact, padic_log_ledger, principal_unit_part, unit_order,
    working_precision, PrecisionLedger,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, kronecker, valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ext {
    Triv,
    /// `Q_p(√m)` with `m` a non-square unit mod `p`.
    Ur(i64),
    /// `Q_p(√m)` with `p ∥ m`; the uniformizer is `√m`.
    Ram(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalField {
    p: u64,
    ext: Ext,
}

impl LocalField {
    pub fn new(p: u64, ext: Ext) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p as i64));
        }
        match ext {
            Ext::Triv => {}
            _ if p == 2 => {
                return Err(Error::UnsupportedField(
                    "quadratic extensions of Q_2".into(),
                ));
            }
            Ext::Ur(m) => {
                if kronecker(m as i128, p as i128) != -1 {
                    return Err(Error::UnsupportedField(format!(
                        "{m} is not a non-square unit mod {p}"
                    )));
                }
            }
            Ext::Ram(m) => {
                if m == 0 || valuation(m as i128, p) != 1 {
                    return Err(Error::UnsupportedField(format!(
                        "{p} does not exactly divide {m}"
                    )));
                }
            }
        }
        Ok(LocalField { p, ext })
    }

    pub fn rational(p: u64) -> Result<Self> {
        Self::new(p, Ext::Triv)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ext(&self) -> Ext {
        self.ext
    }

    /// `m` with `ω = √m`, or `None` for `Q_p`.
    pub fn m(&self) -> Option<i64> {
        match self.ext {
            Ext::Triv => None,
            Ext::Ur(m) | Ext::Ram(m) => Some(m),
        }
    }

    /// Ramification index.
    pub fn e(&self) -> i64 {
        if matches!(self.ext, Ext::Ram(_)) {
            2
        } else {
            1
        }
    }

    /// Residue degree.
    pub fn f(&self) -> u32 {
        if matches!(self.ext, Ext::Ur(_)) {
            2
        } else {
            1
        }
    }

    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f())
    }

    pub fn is_trivial(&self) -> bool {
        self.ext == Ext::Triv
    }

    /// p-adic exponents bounding the two coordinates modulo `π^n`.
    fn coord_exponents(&self, n: i64) -> (u32, u32) {
        let n = n.max(0);
        match self.ext {
            Ext::Triv => (n as u32, 0),
            Ext::Ur(_) => (n as u32, n as u32),
            Ext::Ram(_) => (((n + 1) / 2) as u32, (n / 2) as u32),
        }
    }

    pub(crate) fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub(crate) fn p_pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.p_big(), k as usize)
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            Ext::Triv => write!(f, "Q_{}", self.p),
            Ext::Ur(m) => write!(f, "Q_{}(√{}) unramified", self.p, m),
            Ext::Ram(m) => write!(f, "Q_{}(√{}) ramified", self.p, m),
        }
    }
}

/// An element of `O_{K_𝔭}` known modulo `π^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalElement {
    field: LocalField,
    a: BigInt,
    b: BigInt,
    prec: i64,
    /// `None` when the element is zero at this precision.
    val: Option<i64>,
}

impl LocalElement {
    pub fn new(field: LocalField, a: BigInt, b: BigInt, prec: i64) -> Self {
        let b = if field.is_trivial() {
            BigInt::zero()
        } else {
            b
        };
        let mut x = LocalElement {
            field,
            a,
            b,
            prec: prec.max(0),
            val: None,
        };
        x.normalize();
        x
    }

    pub fn from_int(field: LocalField, n: impl Into<BigInt>, prec: i64) -> Self {
        Self::new(field, n.into(), BigInt::zero(), prec)
    }

    pub fn zero(field: LocalField, prec: i64) -> Self {
        Self::from_int(field, 0, prec)
    }

    pub fn one(field: LocalField, prec: i64) -> Self {
        Self::from_int(field, 1, prec)
    }

    /// The generator `ω = √m` (the uniformizer in the ramified case).
    pub fn omega(field: LocalField, prec: i64) -> Self {
        Self::new(field, BigInt::zero(), BigInt::one(), prec)
    }

    fn normalize(&mut self) {
        let (ea, eb) = self.field.coord_exponents(self.prec);
        self.a = self.a.mod_floor(&self.field.p_pow(ea));
        self.b = if eb == 0 {
            BigInt::zero()
        } else {
            self.b.mod_floor(&self.field.p_pow(eb))
        };
        let p = self.field.p;
        let vp = |x: &BigInt| -> Option<i64> {
            if x.is_zero() {
                None
            } else {
                let mut v = 0;
                let mut y = x.clone();
                let pb = BigInt::from(p);
                while (&y % &pb).is_zero() {
                    y /= &pb;
                    v += 1;
                }
                Some(v)
            }
        };
        let e = self.field.e();
        let va = vp(&self.a).map(|v| e * v);
        let vb = vp(&self.b).map(|v| e * v + (e - 1));
        self.val = match (va, vb) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.min(y)),
        };
    }

    pub fn field(&self) -> LocalField {
        self.field
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation in units of `v(π)`; `None` if zero at this precision.
    pub fn valuation(&self) -> Option<i64> {
        self.val
    }

    /// Valuation, or the precision when the element is indistinguishable from 0.
    pub fn valuation_bound(&self) -> i64 {
        self.val.unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.val == Some(0)
    }

    /// Reduces the stated precision to `n` (no-op if already lower).
    pub fn truncate(&self, n: i64) -> Self {
        Self::new(self.field, self.a.clone(), self.b.clone(), self.prec.min(n))
    }

    /// Integer representative when the element lies in `Z_p`.
    pub fn rational_part(&self) -> &BigInt {
        &self.a
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(Self::new(
            self.field,
            &self.a + &other.a,
            &self.b + &other.b,
            self.prec.min(other.prec),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(Self::new(
            self.field,
            &self.a - &other.a,
            &self.b - &other.b,
            self.prec.min(other.prec),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, -&self.a, -&self.b, self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let m = BigInt::from(self.field.m().unwrap_or(0));
        let a = &self.a * &other.a + &self.b * &other.b * &m;
        let b = &self.a * &other.b + &self.b * &other.a;
        let prec = (self.prec + other.valuation_bound()).min(other.prec + self.valuation_bound());
        Ok(Self::new(self.field, a, b, prec))
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        let vk = if k.is_zero() {
            self.prec
        } else {
            self.field.e() * valuation_big(k, self.field.p)
        };
        Self::new(self.field, &self.a * k, &self.b * k, self.prec + vk)
    }

    /// Galois conjugate `a − b·ω`.
    pub fn conj(&self) -> Self {
        Self::new(self.field, self.a.clone(), -&self.b, self.prec)
    }

    /// `a² − m b²`, the norm to `Q_p`, as an element of `Q_p`.
    pub fn norm(&self) -> Self {
        let m = BigInt::from(self.field.m().unwrap_or(0));
        let n = &self.a * &self.a - &m * &self.b * &self.b;
        let field = LocalField::new(self.field.p, Ext::Triv).expect("p already validated");
        // precision in p-digits of the norm: N(x + δ) - N(x) has valuation ≥ prec + v(x)
        let prec_pi = self.prec + self.valuation_bound();
        let prec_p = prec_pi.div_euclid(self.field.e());
        LocalElement::new(field, n, BigInt::zero(), prec_p)
    }

    pub fn pow(&self, k: &BigInt) -> Result<Self> {
        assert!(!k.is_negative(), "negative exponent");
        if k.is_zero() {
            return Ok(Self::one(self.field, self.prec));
        }
        let mut acc = self.clone();
        for i in (0..k.bits() - 1).rev() {
            acc = acc.mul(&acc)?;
            if k.bit(i) {
                acc = acc.mul(self)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_u64(&self, k: u64) -> Result<Self> {
        self.pow(&BigInt::from(k))
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let n = self.norm();
        let (ea, _) = self.field.coord_exponents(self.prec);
        let modulus = self.field.p_pow(ea.max(1));
        let ninv = mod_inverse(&n.a, &modulus).ok_or(Error::NotAUnit)?;
        let c = self.conj();
        Ok(Self::new(self.field, &c.a * &ninv, &c.b * &ninv, self.prec))
    }

    /// Exact division by `p^k`; requires valuation at least `e·k`.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        let need = self.field.e() * k as i64;
        if self.valuation_bound() < need {
            return Err(Error::OutOfDomain {
                valuation: self.valuation_bound(),
                needed: format!("≥ {need} to divide by {}^{k}", self.field.p),
            });
        }
        let pk = self.field.p_pow(k);
        Ok(Self::new(
            self.field,
            &self.a / &pk,
            &self.b / &pk,
            self.prec - need,
        ))
    }

    /// Exact division by `π^k`.
    pub fn div_pi_pow(&self, k: i64) -> Result<Self> {
        match self.field.ext {
            Ext::Triv | Ext::Ur(_) => self.div_p_pow(k as u32),
            Ext::Ram(m) => {
                if self.valuation_bound() < k {
                    return Err(Error::OutOfDomain {
                        valuation: self.valuation_bound(),
                        needed: format!("≥ {k} to divide by π^{k}"),
                    });
                }
                let mut x = self.clone();
                let p = self.field.p;
                let unit = BigInt::from(m / p as i64);
                let (ea, _) = self.field.coord_exponents(self.prec + 2);
                let uinv = mod_inverse(&unit, &self.field.p_pow(ea.max(1))).expect("m/p is a unit");
                for _ in 0..k {
                    // (a + bπ)/π = b + (a/p)·(m/p)⁻¹·π
                    let a_over_p = if (&x.a % self.field.p_big()).is_zero() {
                        &x.a / self.field.p_big()
                    } else {
                        BigInt::zero()
                    };
                    x = Self::new(self.field, x.b.clone(), a_over_p * &uinv, x.prec - 1);
                }
                Ok(x)
            }
        }
    }

    /// Whether `self ≡ other mod π^n` is certified at the available precision.
    pub fn congruent(&self, other: &Self, n: i64) -> bool {
        match self.sub(other) {
            Ok(d) => d.prec >= n && d.valuation_bound() >= n,
            Err(_) => false,
        }
    }

    /// Coordinates `(z + z̄, (z − z̄)/ω) = (2a, 2b)` as elements of `Q_p`.
    pub fn trace_coordinates(&self) -> (LocalElement, LocalElement) {
        let field = LocalField::new(self.field.p, Ext::Triv).expect("p already validated");
        let (ea, eb) = self.field.coord_exponents(self.prec);
        let two = BigInt::from(2);
        (
            LocalElement::new(field, &self.a * &two, BigInt::zero(), ea as i64),
            LocalElement::new(field, &self.b * &two, BigInt::zero(), eb as i64),
        )
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_trivial() {
            write!(f, "{} + O({}^{})", self.a, self.field.p, self.prec)
        } else {
            write!(f, "{} + {}·ω + O(π^{})", self.a, self.b, self.prec)
        }
    }
}

pub(crate) fn valuation_big(x: &BigInt, p: u64) -> i64 {
    assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    while (&y % &pb).is_zero() {
        y /= &pb;
        v += 1;
    }
    v
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Square root of `m` modulo `p^k` by Hensel lifting, for odd `p` and `m` a
/// nonzero square mod `p`. Returns the root whose reduction mod `p` is the
/// smaller of the two.
pub fn sqrt_mod_prime_power(m: i64, p: u64, k: u32) -> Option<BigInt> {
    assert!(p % 2 == 1);
    let pm = m.rem_euclid(p as i64) as u64;
    let r0 = (1..p).find(|&r| (r * r) % p == pm)?;
    let mb = BigInt::from(m);
    let mut r = BigInt::from(r0);
    let mut modulus = BigInt::from(p);
    let target = num_traits::pow(BigInt::from(p), k as usize);
    while modulus < target {
        modulus = (&modulus * &modulus).min(target.clone());
        let f = &r * &r - &mb;
        let df = &r * 2;
        let inv = mod_inverse(&df, &modulus)?;
        r = (&r - f * inv).mod_floor(&modulus);
    }
    Some(r.mod_floor(&target))
}
