use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::{factorize, is_prime, kronecker};
use crate::padic::sqrt_mod_prime_power;
use crate::scalar::IntScalar;
use crate::snf::RelationLattice;

use super::{QuadElement, QuadField};

/// A non-zero ideal `aZ + (b + cω)Z` of the ring of integers, in Hermite
/// normal form: `a, c > 0`, `c | a`, `c | b`, `0 ≤ b < a`.
///
/// Ideals of `Q` are `aZ` with `b = 0, c = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    field: QuadField,
    a: i128,
    b: i128,
    c: i128,
}

/// Product of `x1 + y1ω` and `x2 + y2ω` in coordinates.
fn mul_coords<T: IntScalar>(field: QuadField, (x1, y1): (&T, &T), (x2, y2): (&T, &T)) -> (T, T) {
    let t = T::from_small(field.omega_trace());
    let n = T::from_small(field.omega_norm());
    let yy = y1.clone() * y2.clone();
    (
        x1.clone() * x2.clone() - n * yy.clone(),
        x1.clone() * y2.clone() + x2.clone() * y1.clone() + t * yy,
    )
}

/// Hermite normal form `(a, b, c)` of the Z-lattice spanned by `rows`;
/// `None` if the lattice is not of full rank.
fn hnf<T: IntScalar>(rows: &[(T, T)]) -> Option<(T, T, T)> {
    let mut pivot = (T::zero(), T::zero());
    let mut a = T::zero();
    for (x, y) in rows {
        if y.is_zero() {
            a = a.gcd(x);
            continue;
        }
        if pivot.1.is_zero() {
            pivot = (x.clone(), y.clone());
            continue;
        }
        let e = pivot.1.extended_gcd(y);
        let (g, u, v) = (e.gcd, e.x, e.y);
        let new_pivot = (
            u.clone() * pivot.0.clone() + v.clone() * x.clone(),
            u * pivot.1.clone() + v * y.clone(),
        );
        // the y-free combination
        let free = (y.clone() / g.clone()) * pivot.0.clone() - (pivot.1.clone() / g) * x.clone();
        a = a.gcd(&free);
        pivot = new_pivot;
    }
    if a.is_zero() || pivot.1.is_zero() {
        return None;
    }
    if pivot.1.is_negative() {
        pivot = (-pivot.0, -pivot.1);
    }
    let b = pivot.0.mod_floor(&a);
    Some((a, b, pivot.1))
}

impl QuadIdeal {
    pub fn from_hnf(field: QuadField, a: i128, b: i128, c: i128) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::Format(format!(
                "({a}, {b}, {c}) is not an ideal in HNF: {why}"
            )))
        };
        if field.is_rational() {
            if a <= 0 || b != 0 || c != 1 {
                return bad("ideals of Q are (a, 0, 1) with a > 0");
            }
            return Ok(QuadIdeal { field, a, b, c });
        }
        if a <= 0 || c <= 0 || a % c != 0 || b % c != 0 || !(0..a).contains(&b) {
            return bad("normalization");
        }
        let id = QuadIdeal { field, a, b, c };
        // closed under multiplication by ω
        let w = (0i128, 1i128);
        for g in [(a, 0i128), (b, c)] {
            let (x, y) = mul_coords(field, (&g.0, &g.1), (&w.0, &w.1));
            if !id.contains(x, y) {
                return bad("not an O-module");
            }
        }
        Ok(id)
    }

    /// Ideal generated (as an O-module) by integral elements given by coordinates.
    pub fn from_generators<T: IntScalar>(field: QuadField, gens: &[(T, T)]) -> Result<Self> {
        if field.is_rational() {
            let a = gens.iter().fold(T::zero(), |acc, (x, _)| acc.gcd(x));
            let a = a
                .to_i128()
                .filter(|&a| a > 0)
                .ok_or_else(|| Error::Format("zero or oversized ideal".into()))?;
            return Ok(QuadIdeal {
                field,
                a,
                b: 0,
                c: 1,
            });
        }
        let (zero, one) = (T::zero(), T::one());
        let mut rows = Vec::with_capacity(2 * gens.len());
        for (x, y) in gens {
            rows.push((x.clone(), y.clone()));
            rows.push(mul_coords(field, (x, y), (&zero, &one)));
        }
        let (a, b, c) = hnf(&rows).ok_or_else(|| Error::Format("zero ideal".into()))?;
        let conv = |v: T| {
            v.to_i128()
                .ok_or_else(|| Error::Format("ideal entries overflow i128".into()))
        };
        Ok(QuadIdeal {
            field,
            a: conv(a)?,
            b: conv(b)?,
            c: conv(c)?,
        })
    }

    /// `(α)` for a non-zero integral element.
    pub fn principal<T: IntScalar>(alpha: &QuadElement<T>) -> Result<Self> {
        let (x, y) = alpha
            .integral_coords()
            .ok_or_else(|| Error::Format(format!("{alpha} is not integral")))?;
        Self::from_generators(alpha.field(), &[(x, y)])
    }

    pub fn from_int(field: QuadField, n: i128) -> Self {
        Self::from_generators(field, &[(n, 0)]).expect("non-zero integer")
    }

    pub fn unit(field: QuadField) -> Self {
        Self::from_int(field, 1)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    /// HNF rows `[a, 0, b, c]`.
    pub fn hnf(&self) -> [i128; 4] {
        [self.a, 0, self.b, self.c]
    }

    pub fn norm(&self) -> i128 {
        self.a * self.c
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Z-basis `(a, b + cω)` as elements.
    pub fn basis(&self) -> [QuadElement<i128>; 2] {
        let f = self.field;
        if f.is_rational() {
            return [
                QuadElement::from_int(f, self.a),
                QuadElement::from_int(f, self.a),
            ];
        }
        [
            QuadElement::from_int(f, self.a),
            QuadElement::integral(f, self.b, self.c),
        ]
    }

    /// Whether `x + yω` lies in the ideal.
    pub fn contains<T: IntScalar>(&self, x: T, y: T) -> bool {
        let a = T::from_i128(self.a).expect("fits");
        if self.field.is_rational() {
            return y.is_zero() && x.is_multiple_of(&a);
        }
        let (b, c) = (
            T::from_i128(self.b).expect("fits"),
            T::from_i128(self.c).expect("fits"),
        );
        if !y.is_multiple_of(&c) {
            return false;
        }
        (x - b * (y / c)).is_multiple_of(&a)
    }

    pub fn contains_element<T: IntScalar>(&self, alpha: &QuadElement<T>) -> bool {
        match alpha.integral_coords() {
            Some((x, y)) => self.contains(x, y),
            None => false,
        }
    }

    /// Canonical representative of `x + yω` modulo the ideal, with
    /// `0 ≤ y < c` and `0 ≤ x < a`.
    pub fn reduce(&self, x: &BigInt, y: &BigInt) -> (i128, i128) {
        let a = BigInt::from(self.a);
        if self.field.is_rational() {
            return (x.mod_floor(&a).to_i128().expect("reduced"), 0);
        }
        let c = BigInt::from(self.c);
        let y0 = y.mod_floor(&c);
        let k = (y - &y0) / &c;
        let x0 = (x - k * self.b).mod_floor(&a);
        (
            x0.to_i128().expect("reduced"),
            y0.to_i128().expect("reduced"),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.field.is_rational() {
            return Self::from_int(self.field, self.a * other.a);
        }
        let g1 = [(self.a, 0i128), (self.b, self.c)];
        let g2 = [(other.a, 0i128), (other.b, other.c)];
        let rows: Vec<(i128, i128)> = g1
            .iter()
            .flat_map(|u| g2.iter().map(move |v| (u, v)))
            .map(|(u, v)| mul_coords(self.field, (&u.0, &u.1), (&v.0, &v.1)))
            .collect();
        let (a, b, c) = hnf(&rows).expect("product of non-zero ideals");
        QuadIdeal {
            field: self.field,
            a,
            b,
            c,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::unit(self.field);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sum `I + J`, the greatest common divisor.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field, "field mismatch");
        let gens = [
            (self.a, 0),
            (self.b, self.c),
            (other.a, 0),
            (other.b, other.c),
        ];
        Self::from_generators(self.field, &gens).expect("non-zero")
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.add(other).is_unit()
    }

    /// Image under the non-trivial automorphism.
    pub fn conj(&self) -> Self {
        if self.field.is_rational() {
            return *self;
        }
        let t = self.field.omega_trace() as i128;
        Self::from_generators(self.field, &[(self.a, 0), (self.b + t * self.c, -self.c)])
            .expect("non-zero")
    }

    /// `other ⊆ self`, i.e. `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.contains(other.a, 0) && (self.field.is_rational() || self.contains(other.b, other.c))
    }

    /// Exact quotient by a rational integer dividing every HNF entry.
    fn div_int(&self, n: i128) -> Option<Self> {
        if self.field.is_rational() {
            return (self.a % n == 0).then(|| Self::from_int(self.field, self.a / n));
        }
        (self.a % n == 0 && self.b % n == 0 && self.c % n == 0).then(|| QuadIdeal {
            field: self.field,
            a: self.a / n,
            b: self.b / n,
            c: self.c / n,
        })
    }

    /// Exact quotient `self / q` when `q` divides `self`.
    pub fn div_exact(&self, q: &Self) -> Option<Self> {
        if !q.divides(self) {
            return None;
        }
        if self.field.is_rational() {
            return Some(Self::from_int(self.field, self.a / q.a));
        }
        self.mul(&q.conj()).div_int(q.norm())
    }

    /// Prime factorization, primes ordered by norm then HNF.
    pub fn factor(&self) -> Vec<(QuadIdeal, u32)> {
        let mut out = Vec::new();
        let mut rest = *self;
        for (l, _) in factorize(self.norm() as u64) {
            let split = split_prime(self.field, l).expect("prime");
            for pa in split.primes {
                let mut e = 0;
                while let Some(q) = rest.div_exact(&pa.ideal) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pa.ideal, e));
                }
            }
        }
        debug_assert!(rest.is_unit());
        out
    }

    pub fn is_prime(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1
    }
}

impl std::fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.field.is_rational() {
            return write!(f, "({})", self.a);
        }
        write!(f, "[{}, {}+{}ω]", self.a, self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
    /// The base field is `Q`: one prime with `e = f = 1`.
    Rational,
}

/// A prime above `l` with ramification index and residue degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeAbove {
    pub ideal: QuadIdeal,
    pub e: u32,
    pub f: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub l: u64,
    pub kind: SplitKind,
    pub primes: Vec<PrimeAbove>,
}

/// Decomposition of `lO_K`, decided by the Kronecker symbol `(D | l)`.
pub fn split_prime(field: QuadField, l: u64) -> Result<Splitting> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l as i64));
    }
    let li = l as i128;
    if field.is_rational() {
        return Ok(Splitting {
            l,
            kind: SplitKind::Rational,
            primes: vec![PrimeAbove {
                ideal: QuadIdeal::from_int(field, li),
                e: 1,
                f: 1,
            }],
        });
    }
    let (t, n) = (field.omega_trace() as i128, field.omega_norm() as i128);
    // roots of x² − t x + n mod l
    let root = || -> i128 {
        if l == 2 {
            return (0..2)
                .find(|r| (r * r - t * r + n).rem_euclid(2) == 0)
                .expect("root exists");
        }
        let d = field.disc() as i128;
        let s = if d % li == 0 {
            0
        } else {
            sqrt_mod_prime_power(field.disc(), l, 1)
                .and_then(|s| s.to_i128())
                .expect("D is a square mod l")
        };
        let inv2 = (li + 1) / 2;
        ((t + s) * inv2).rem_euclid(li)
    };
    let prime_for =
        |r: i128| QuadIdeal::from_hnf(field, li, (-r).rem_euclid(li), 1).expect("prime ideal");
    let k = kronecker(field.disc() as i128, li);
    let (kind, primes) = match k {
        -1 => (
            SplitKind::Inert,
            vec![PrimeAbove {
                ideal: QuadIdeal::from_int(field, li),
                e: 1,
                f: 2,
            }],
        ),
        0 => (
            SplitKind::Ramified,
            vec![PrimeAbove {
                ideal: prime_for(root()),
                e: 2,
                f: 1,
            }],
        ),
        _ => {
            let r = root();
            let mut ps = [prime_for(r), prime_for((t - r).rem_euclid(li))];
            ps.sort();
            (
                SplitKind::Split,
                ps.iter()
                    .map(|&ideal| PrimeAbove { ideal, e: 1, f: 1 })
                    .collect(),
            )
        }
    };
    Ok(Splitting { l, kind, primes })
}

/// Whether the ideals are multiplicatively independent, decided on the
/// exponent vectors of their prime factorizations.
pub fn multiplicative_independence(ideals: &[QuadIdeal]) -> bool {
    let factored: Vec<Vec<(QuadIdeal, u32)>> = ideals.iter().map(|i| i.factor()).collect();
    let mut support: BTreeMap<QuadIdeal, usize> = BTreeMap::new();
    for f in &factored {
        for (p, _) in f {
            let next = support.len();
            support.entry(*p).or_insert(next);
        }
    }
    let mut lattice = RelationLattice::new(support.len());
    for f in &factored {
        let mut row = vec![0i128; support.len()];
        for (p, e) in f {
            row[support[p]] = *e as i128;
        }
        lattice.insert(&row);
    }
    lattice.basis().len() == ideals.len()
}
