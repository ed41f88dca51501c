use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

use super::{OrientedLattice, QuadElement, QuadField, QuadIdeal};

/// Fundamental unit `ε > 1` of a real quadratic field, read off the first
/// period of the continued fraction of ω.
pub fn fundamental_unit(field: QuadField) -> Result<QuadElement<BigInt>> {
    if !field.is_real() || field.is_rational() {
        return Err(Error::NotRealQuadratic(field.m()));
    }
    let m = BigInt::from(field.m());
    let root = m.sqrt();
    let t = BigInt::from(field.omega_trace());
    // ω = (P + √m)/Q
    let (p0, q0) = if field.half_integral() {
        (BigInt::one(), BigInt::from(2))
    } else {
        (BigInt::from(0), BigInt::one())
    };
    let (mut p, mut q) = (p0, q0.clone());
    let (mut h1, mut h2) = (BigInt::one(), BigInt::from(0));
    let (mut k1, mut k2) = (BigInt::from(0), BigInt::one());
    loop {
        let a = (&p + &root).div_floor(&q);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        let p_next = &a * &q - &p;
        let q_next = (&m - &p_next * &p_next) / &q;
        if q_next == q0 {
            // h − k·conj(ω)
            let eps = QuadElement::integral(field, &h - &k * &t, k.clone());
            if eps.norm().abs().is_one() {
                return Ok(eps);
            }
        }
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
        (p, q) = (p_next, q_next);
    }
}

/// Generator of the totally positive units `O_K^{×,+}` of a real field:
/// `ε` if `N(ε) = 1`, otherwise `ε²`.
pub fn totally_positive_generator(field: QuadField) -> Result<QuadElement<BigInt>> {
    let eps = fundamental_unit(field)?;
    if eps.norm().is_one() {
        Ok(eps)
    } else {
        Ok(eps.mul(&eps))
    }
}

/// Generators of the units that are positive at every real place: `γ` for
/// real quadratic fields, a generator of the roots of unity for complex
/// fields, nothing for `Q`.
pub fn totally_positive_units(field: QuadField) -> Result<Vec<QuadElement<BigInt>>> {
    if field.is_rational() {
        return Ok(Vec::new());
    }
    if field.is_real() {
        return Ok(vec![totally_positive_generator(field)?]);
    }
    let zeta = match field.m() {
        // i, and the primitive sixth root (1+√−3)/2
        -1 | -3 => QuadElement::omega(field),
        _ => QuadElement::from_int(field, BigInt::from(-1)),
    };
    Ok(vec![zeta])
}

/// A generator of `I` if it is principal, found by form reduction with a
/// tracked basis. With `totally_positive`, only a totally positive generator
/// is accepted (narrow principality); otherwise the sign is normalized to be
/// positive at the first embedding.
pub fn principal_generator(i: &QuadIdeal, totally_positive: bool) -> Option<QuadElement<BigInt>> {
    let field = i.field();
    if field.is_rational() {
        return Some(QuadElement::from_int(field, BigInt::from(i.norm())));
    }
    let mut lat = OrientedLattice::new(i);
    lat.reduce();
    let found = if field.is_complex() {
        (lat.form().a == 1).then(|| lat.basis()[0].clone())
    } else {
        let start = lat.form().clone();
        let mut found = None;
        loop {
            let a = lat.form().a;
            if a == 1 || (a == -1 && !totally_positive && found.is_none()) {
                found = Some(lat.basis()[0].clone());
                if a == 1 {
                    break;
                }
            }
            lat.rho();
            if *lat.form() == start {
                break;
            }
        }
        found.map(|alpha| {
            if alpha.sign_at(0) == Some(-1) {
                alpha.neg()
            } else {
                alpha
            }
        })
    };
    if let Some(alpha) = &found {
        debug_assert_eq!(alpha.norm().to_integer().abs(), BigInt::from(i.norm()));
        debug_assert!(!totally_positive || alpha.is_totally_positive());
    }
    found
}

/// Smallest `n ≥ 1` with `I^n` narrowly principal, with a totally positive
/// generator of `I^n`.
pub fn ideal_power_class_exponent(i: &QuadIdeal) -> (u32, QuadElement<BigInt>) {
    let mut power = *i;
    for n in 1.. {
        if let Some(alpha) = principal_generator(&power, true) {
            return (n, alpha);
        }
        power = power.mul(i);
    }
    unreachable!("the class group is finite")
}
