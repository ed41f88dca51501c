use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::presentation::{AbelianGroupPresentation, DEFAULT_ORDER_CEILING};
use crate::scalar::IntScalar;

use super::{QuadElement, QuadField, QuadIdeal};

/// Default bound on `|D|` for class group computations.
pub const DEFAULT_DISC_BOUND: i64 = 10_000_000;

/// Integer 2×2 matrix acting on forms by `f ↦ f(m00·x + m01·y, m10·x + m11·y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: IntScalar> Mat2<T> {
    pub fn identity() -> Self {
        Mat2([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| {
            a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone()
        };
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    fn translate(k: T) -> Self {
        Mat2([[T::one(), k], [T::zero(), T::one()]])
    }

    fn rho(s: T) -> Self {
        Mat2([[T::zero(), -T::one()], [T::one(), s]])
    }
}

/// The binary quadratic form `a x² + b xy + c y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm<T: IntScalar> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: IntScalar> BinaryForm<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        BinaryForm { a, b, c }
    }

    /// `x² + t xy + n y²`, the norm form of `{1, ω}`.
    pub fn principal(field: QuadField) -> Self {
        BinaryForm::new(
            T::one(),
            T::from_small(field.omega_trace()),
            T::from_small(field.omega_norm()),
        )
    }

    pub fn disc(&self) -> T {
        self.b.clone() * self.b.clone() - T::from_small(4) * self.a.clone() * self.c.clone()
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.a.clone() * x.clone() * x.clone()
            + self.b.clone() * x.clone() * y.clone()
            + self.c.clone() * y.clone() * y.clone()
    }

    pub fn transform(&self, m: &Mat2<T>) -> Self {
        let [[p, q], [r, s]] = &m.0;
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let two = T::from_small(2);
        BinaryForm {
            a: self.eval(p, r),
            b: two.clone() * a.clone() * p.clone() * q.clone()
                + b.clone() * (p.clone() * s.clone() + q.clone() * r.clone())
                + two * c.clone() * r.clone() * s.clone(),
            c: self.eval(q, s),
        }
    }

    fn root_floor(&self) -> T {
        self.disc().sqrt()
    }

    pub fn is_reduced(&self) -> bool {
        let d = self.disc();
        if d.is_negative() {
            let (a, b, c) = (&self.a, &self.b, &self.c);
            a.is_positive()
                && b.abs() <= *a
                && a <= c
                && !(b.is_negative() && (b.abs() == *a || a == c))
        } else {
            // |√D − 2|a|| < b < √D
            let q = self.root_floor();
            let b = &self.b;
            let two_a = T::from_small(2) * self.a.abs();
            let lower = two_a.clone() + b.clone();
            let upper = two_a - b.clone();
            b.is_positive()
                && *b <= q
                && lower.clone() * lower > d
                && (upper.is_negative() || upper.clone() * upper < d)
        }
    }

    /// One step of the reduction operator `ρ` for indefinite forms; returns
    /// the new form and the matrix realizing it.
    pub fn rho(&self) -> (Self, Mat2<T>) {
        let q = self.root_floor();
        let two_c = T::from_small(2) * self.c.abs();
        let r = if self.c.abs() > q {
            let r = (-self.b.clone()).mod_floor(&two_c);
            if r > self.c.abs() {
                r - two_c
            } else {
                r
            }
        } else {
            q.clone() - (q + self.b.clone()).mod_floor(&two_c)
        };
        let s = (r + self.b.clone()) / (T::from_small(2) * self.c.clone());
        let m = Mat2::rho(s);
        (self.transform(&m), m)
    }

    /// Reduces the form; the matrix has determinant 1.
    pub fn reduce(&self) -> (Self, Mat2<T>) {
        let mut f = self.clone();
        let mut total = Mat2::identity();
        if self.disc().is_negative() {
            assert!(
                self.a.is_positive(),
                "only positive definite forms are reduced"
            );
            loop {
                let two_a = T::from_small(2) * f.a.clone();
                if f.b > f.a || f.b <= -f.a.clone() {
                    let k = (f.a.clone() - f.b.clone()).div_floor(&two_a);
                    let m = Mat2::translate(k);
                    f = f.transform(&m);
                    total = total.mul(&m);
                }
                if f.a > f.c || (f.a == f.c && f.b.is_negative()) {
                    let m = Mat2::rho(T::zero());
                    f = f.transform(&m);
                    total = total.mul(&m);
                    continue;
                }
                return (f, total);
            }
        }
        while !f.is_reduced() {
            let (g, m) = f.rho();
            f = g;
            total = total.mul(&m);
        }
        (f, total)
    }

    /// The `ρ`-cycle of a reduced indefinite form, starting with the form.
    pub fn cycle(&self) -> Vec<Self> {
        assert!(self.disc().is_positive() && self.is_reduced());
        let mut out = vec![self.clone()];
        let mut f = self.rho().0;
        while f != *self {
            out.push(f.clone());
            f = f.rho().0;
        }
        out
    }

    /// Canonical representative of the proper equivalence class: the reduced
    /// form (definite), or the smallest form with `a > 0` in the cycle.
    pub fn canonical(&self) -> Self {
        let (r, _) = self.reduce();
        if self.disc().is_negative() {
            return r;
        }
        r.cycle()
            .into_iter()
            .filter(|f| f.a.is_positive())
            .min()
            .expect("cycle has a > 0 forms")
    }
}

impl<T: IntScalar> std::fmt::Display for BinaryForm<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A positively oriented basis `(ω1, ω2)` of an ideal together with its
/// form `N(xω1 + yω2)/N(I)`; reduction steps move basis and form together.
#[derive(Debug, Clone)]
pub struct OrientedLattice {
    ideal: QuadIdeal,
    basis: [QuadElement<BigInt>; 2],
    form: BinaryForm<i128>,
}

impl OrientedLattice {
    pub fn new(ideal: &QuadIdeal) -> Self {
        let [a, _, b, c] = ideal.hnf();
        let k = ideal.field();
        assert!(!k.is_rational());
        let t = k.omega_trace() as i128;
        let w2 = QuadElement::<i128>::integral(k, b, c);
        let form = BinaryForm::new(a / c, (2 * b + c * t) / c, w2.norm().to_integer() / (a * c));
        OrientedLattice {
            ideal: *ideal,
            basis: [
                QuadElement::<BigInt>::from_int(k, BigInt::from(a)),
                w2.to_big(),
            ],
            form,
        }
    }

    pub fn ideal(&self) -> &QuadIdeal {
        &self.ideal
    }

    pub fn form(&self) -> &BinaryForm<i128> {
        &self.form
    }

    pub fn basis(&self) -> &[QuadElement<BigInt>; 2] {
        &self.basis
    }

    pub fn apply(&mut self, m: &Mat2<i128>) {
        let [[p, q], [r, s]] = m.0;
        let comb = |u: i128, v: i128| {
            self.basis[0]
                .scale_int(BigInt::from(u))
                .add(&self.basis[1].scale_int(BigInt::from(v)))
        };
        let w1 = comb(p, r);
        let w2 = comb(q, s);
        self.basis = [w1, w2];
        self.form = self.form.transform(m);
    }

    pub fn reduce(&mut self) {
        let (_, m) = self.form.reduce();
        self.apply(&m);
    }

    pub fn rho(&mut self) {
        let (_, m) = self.form.rho();
        self.apply(&m);
    }

    /// `N(ω1)/N(I)`, which equals the leading coefficient of the form.
    pub fn check(&self) -> bool {
        let n = BigInt::from(self.ideal.norm());
        let f1 = self.basis[0].norm();
        f1 == Ratio::from_integer(n * BigInt::from(self.form.a))
    }
}

/// The narrow class group `Cl⁺(K)`, realized as the proper equivalence
/// classes of primitive forms of discriminant `D`.
#[derive(Debug, Clone)]
pub struct NarrowClassGroup {
    field: QuadField,
    presentation: AbelianGroupPresentation<BinaryForm<i128>>,
}

/// Computes `Cl⁺(K)` by enumerating reduced forms.
pub fn narrow_class_group(field: QuadField, disc_bound: i64) -> Result<NarrowClassGroup> {
    let d = field.disc() as i128;
    if d.abs() > disc_bound as i128 {
        return Err(Error::DiscriminantTooLarge {
            disc: d as i64,
            bound: disc_bound,
        });
    }
    let reps = if field.is_rational() {
        Vec::new()
    } else {
        class_representatives(d)
    };
    let identity = NarrowClassGroup::identity_form(field);
    let presentation = AbelianGroupPresentation::discover(
        identity,
        reps,
        |f, g| compose(field, f, g),
        DEFAULT_ORDER_CEILING,
    )?;
    Ok(NarrowClassGroup {
        field,
        presentation,
    })
}

/// Canonical representatives of all classes of primitive forms of
/// discriminant `d` (positive definite when `d < 0`), sorted.
fn class_representatives(d: i128) -> Vec<BinaryForm<i128>> {
    let mut reps = BTreeSet::new();
    if d < 0 {
        let mut a = 1i128;
        while 3 * a * a <= -d {
            for b in -a + 1..=a {
                if (b * b - d) % (4 * a) != 0 {
                    continue;
                }
                let f = BinaryForm::new(a, b, (b * b - d) / (4 * a));
                if f.is_primitive() && f.is_reduced() {
                    reps.insert(f);
                }
            }
            a += 1;
        }
        return reps.into_iter().collect();
    }
    let q = (d as u128).sqrt() as i128;
    let mut seen = HashSet::new();
    for b in 1..=q {
        if (b * b - d) % 4 != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = BinaryForm::new(sa, b, ac / sa);
                if !f.is_primitive() || !f.is_reduced() || seen.contains(&f) {
                    continue;
                }
                let cyc = f.cycle();
                let rep = cyc
                    .iter()
                    .filter(|g| g.a > 0)
                    .min()
                    .expect("cycle has a > 0 forms")
                    .clone();
                seen.extend(cyc);
                reps.insert(rep);
            }
        }
    }
    reps.into_iter().collect()
}

fn compose(field: QuadField, f: &BinaryForm<i128>, g: &BinaryForm<i128>) -> BinaryForm<i128> {
    if field.is_rational() {
        return f.clone();
    }
    let i = ideal_of_canonical(field, f).mul(&ideal_of_canonical(field, g));
    form_of_ideal(&i).canonical()
}

fn ideal_of_canonical(field: QuadField, f: &BinaryForm<i128>) -> QuadIdeal {
    let t = field.omega_trace() as i128;
    QuadIdeal::from_hnf(field, f.a, ((f.b - t) / 2).rem_euclid(f.a), 1)
        .expect("form with a > 0 gives an ideal")
}

/// The form `N(x a + y(b + cω)) / N(I)` of the HNF basis of an ideal.
fn form_of_ideal(i: &QuadIdeal) -> BinaryForm<i128> {
    OrientedLattice::new(i).form
}

impl NarrowClassGroup {
    fn identity_form(field: QuadField) -> BinaryForm<i128> {
        if field.is_rational() {
            BinaryForm::new(1, 1, 0)
        } else {
            BinaryForm::principal(field).canonical()
        }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn presentation(&self) -> &AbelianGroupPresentation<BinaryForm<i128>> {
        &self.presentation
    }

    pub fn group(&self) -> &crate::group::AbelianGroup {
        self.presentation.group()
    }

    pub fn order(&self) -> u64 {
        self.presentation.order()
    }

    pub fn invariants(&self) -> &[u64] {
        self.presentation.invariants()
    }

    /// Canonical form of each class, by class index.
    pub fn forms(&self) -> &[BinaryForm<i128>] {
        self.presentation.elements()
    }

    /// Class index of a primitive form of discriminant `D` (`a > 0` when
    /// definite).
    pub fn class_of_form(&self, f: &BinaryForm<i128>) -> Option<usize> {
        if self.field.is_rational() {
            return Some(0);
        }
        if f.disc() != self.field.disc() as i128 || !f.is_primitive() || (f.disc() < 0 && f.a < 0) {
            return None;
        }
        self.presentation.index_of(&f.canonical())
    }

    pub fn class_of_ideal(&self, i: &QuadIdeal) -> usize {
        if self.field.is_rational() {
            return 0;
        }
        self.presentation
            .index_of(&form_of_ideal(i).canonical())
            .expect("every ideal has a class")
    }

    /// An ideal in the class with the given index.
    pub fn ideal_of_class(&self, idx: usize) -> QuadIdeal {
        if self.field.is_rational() {
            return QuadIdeal::unit(self.field);
        }
        ideal_of_canonical(self.field, self.presentation.element(idx))
    }

    pub fn compose(&self, f: &BinaryForm<i128>, g: &BinaryForm<i128>) -> BinaryForm<i128> {
        compose(self.field, f, g)
    }
}

impl BinaryForm<i128> {
    pub fn to_array(&self) -> [i128; 3] {
        [self.a, self.b, self.c]
    }
}

impl<T: IntScalar> BinaryForm<T> {
    pub fn to_i64_array(&self) -> Option<[i64; 3]> {
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?])
    }
}
