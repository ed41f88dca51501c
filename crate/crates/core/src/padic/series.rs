use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ntheory::{ceil_log, factorize, valuation};

use super::{mod_inverse, LocalElement, LocalField};

/// Precision bookkeeping for one series evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrecisionLedger {
    /// Requested output precision, in units of `v(π)`.
    pub requested: i64,
    /// Guard digits added on top of the request.
    pub guard: i64,
    /// Number of series terms summed.
    pub series_len: u64,
    /// Digits lost between the input and the output.
    pub worst_case_loss: i64,
    /// Precision actually certified for the output.
    pub achieved: i64,
}

/// Working precision `W = N + e·(k + ⌈log_p L⌉) + 2` for a logarithm at
/// precision `N`, with `k ≤ 1` extra p-power and `L ≤ 4N + 16` terms.
pub fn working_precision(field: LocalField, n: i64) -> i64 {
    let l_bound = 4 * n.max(1) as u64 + 16;
    n + field.e() * (1 + ceil_log(l_bound, field.p()) as i64) + 2
}

/// `x / d` for a nonzero integer `d`, exact in the p-part.
fn div_int(x: &LocalElement, d: u64) -> Result<LocalElement> {
    let field = x.field();
    let v = valuation(d as i128, field.p());
    let unit = d / field.p().pow(v);
    let y = x.div_p_pow(v)?;
    let modulus = field.p_pow(y.precision().max(1) as u32 + 1);
    let inv = mod_inverse(&BigInt::from(unit), &modulus).expect("unit");
    Ok(LocalElement::new(
        field,
        y.a() * &inv,
        y.b() * &inv,
        y.precision(),
    ))
}

/// `ln u` for a unit `u`, to `n` digits when the input carries enough
/// precision (see [`working_precision`]); the output never claims more than
/// it has.
pub fn padic_log(u: &LocalElement, n: i64) -> Result<LocalElement> {
    padic_log_ledger(u, n).map(|(x, _)| x)
}

/// `ln(a + b·ω)` for exact integer coordinates, evaluated at the working
/// precision for `n` output digits.
pub fn padic_log_exact(field: LocalField, a: &BigInt, b: &BigInt, n: i64) -> Result<LocalElement> {
    let w = working_precision(field, n);
    let u = LocalElement::new(field, a.clone(), b.clone(), w);
    let x = padic_log(&u, n)?;
    if x.precision() < n {
        return Err(Error::Inconclusive(format!(
            "log reached {} of {n} digits",
            x.precision()
        )));
    }
    Ok(x)
}

pub fn padic_log_ledger(u: &LocalElement, n: i64) -> Result<(LocalElement, PrecisionLedger)> {
    if !u.is_unit() {
        return Err(Error::NotAUnit);
    }
    let field = u.field();
    let (p, e) = (field.p(), field.e());
    // ln u = f(u^{(q-1)p^k}) / ((q-1)p^k), or ln(u²)/2 for p = 2
    let (mut z, unit_part, mut k) = if p == 2 {
        (u.mul(u)?, 1u64, 1u32)
    } else {
        (u.pow_u64(field.q() - 1)?, field.q() - 1, 0u32)
    };
    let one = LocalElement::one(field, z.precision());
    while z.sub(&one)?.valuation_bound() * (p as i64 - 1) <= e {
        z = z.pow_u64(p)?;
        k += 1;
    }
    let w = z.sub(&one)?;
    let target = w.precision();
    let mut ledger = PrecisionLedger {
        requested: n,
        guard: working_precision(field, n) - n,
        series_len: 0,
        worst_case_loss: 0,
        achieved: 0,
    };
    let sum = if w.is_zero() {
        LocalElement::zero(field, target)
    } else {
        let t = w.valuation_bound();
        // m·t − e·log_p(m) bounds v(w^m/m) from below and increases for m ≥ 2
        let tail =
            |m: u64| (m as f64 * t as f64 - e as f64 * (m as f64).log(p as f64)).floor() as i64;
        let mut sum = LocalElement::zero(field, target);
        let mut power = w.clone();
        let mut m = 1u64;
        loop {
            let term = div_int(&power, m)?;
            sum = if m % 2 == 1 {
                sum.add(&term)?
            } else {
                sum.sub(&term)?
            };
            if tail(m + 1) >= target {
                break;
            }
            power = power.mul(&w)?;
            m += 1;
        }
        ledger.series_len = m;
        sum.truncate(tail(m + 1))
    };
    let x = div_int(&sum.div_p_pow(k)?, unit_part)?;
    ledger.worst_case_loss = u.precision() - x.precision();
    let x = x.truncate(n);
    ledger.achieved = x.precision();
    Ok((x, ledger))
}

/// `exp x` for `v(x) > e/(p−1)`.
pub fn padic_exp(x: &LocalElement, n: i64) -> Result<LocalElement> {
    let field = x.field();
    let (p, e) = (field.p() as i64, field.e());
    let v = x.valuation_bound();
    if v * (p - 1) <= e {
        return Err(Error::OutOfDomain {
            valuation: v,
            needed: format!("{e}/{}", p - 1),
        });
    }
    let target = x.precision();
    let mut sum = LocalElement::one(field, target);
    if x.is_zero() {
        return Ok(sum.truncate(n));
    }
    // v(x^m/m!) ≥ m·v − e(m−1)/(p−1)
    let lower = |m: i64| m * v - (e * (m - 1)) / (p - 1);
    let mut term = LocalElement::one(field, target);
    let mut m = 1u64;
    loop {
        term = div_int(&term.mul(x)?, m)?;
        sum = sum.add(&term)?;
        if lower(m as i64 + 1) >= target {
            break;
        }
        m += 1;
    }
    Ok(sum.truncate(lower(m as i64 + 1)).truncate(n))
}

/// Splits a unit as `u = τ·u₁` with `τ` a root of unity of order dividing
/// `q − 1` (±1 when `p = 2`) and `u₁` a principal unit (`≡ 1 mod 4` when
/// `p = 2`). Returns the order of `τ` and `u₁`.
pub fn principal_unit_part(u: &LocalElement) -> Result<(u64, LocalElement)> {
    if !u.is_unit() {
        return Err(Error::NotAUnit);
    }
    let field = u.field();
    let prec = u.precision();
    if field.p() == 2 {
        let four = BigInt::from(4);
        if (u.a() % &four) == BigInt::one() {
            return Ok((1, u.clone()));
        }
        return Ok((2, u.neg()));
    }
    let q = field.q();
    let big_q = num_traits::pow(BigInt::from(q), prec.max(1) as usize);
    let tau = u.pow(&big_q)?;
    let one = LocalElement::one(field, prec);
    let mut order = q - 1;
    for (r, _) in factorize(q - 1) {
        while order % r == 0 && tau.pow_u64(order / r)?.congruent(&one, prec) {
            order /= r;
        }
    }
    let u1 = u.mul(&tau.inverse()?)?;
    Ok((order, u1))
}

/// Multiplicative order of a unit in `(O/π^n)^×`.
pub fn unit_order(u: &LocalElement, n: i64) -> Result<u64> {
    if !u.is_unit() {
        return Err(Error::NotAUnit);
    }
    if u.precision() < n {
        return Err(Error::Inconclusive(format!(
            "unit known to {} digits, order mod π^{n} requested",
            u.precision()
        )));
    }
    let field = u.field();
    let q = field.q();
    let group_order = (0..n.max(1) - 1)
        .try_fold(q - 1, |acc, _| acc.checked_mul(q))
        .ok_or(Error::GroupTooLarge {
            order: u64::MAX,
            ceiling: u64::MAX,
        })?;
    let one = LocalElement::one(field, n);
    let u = u.truncate(n);
    let mut order = group_order;
    for (r, _) in factorize(group_order) {
        while order % r == 0 && u.pow_u64(order / r)?.congruent(&one, n) {
            order /= r;
        }
    }
    debug_assert!(u.pow_u64(order)?.congruent(&one, n) || n == 0);
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Ext;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn q(p: u64) -> LocalField {
        LocalField::rational(p).unwrap()
    }

    fn log_int(p: u64, x: i64, n: i64) -> LocalElement {
        padic_log_exact(q(p), &BigInt::from(x), &BigInt::zero(), n).unwrap()
    }

    /// Term-by-term rational summation of the logarithm series, reduced mod p^n.
    fn oracle_log(p: u64, x: i64, n: u32, terms: u64) -> BigInt {
        let modulus = num_traits::pow(BigInt::from(p), n as usize);
        let order = (1..p)
            .find(|&k| {
                num_traits::pow(BigInt::from(x), k as usize).mod_floor(&BigInt::from(p))
                    == BigInt::one()
            })
            .unwrap();
        let z = num_traits::pow(BigInt::from(x), order as usize);
        let w = BigRational::from_integer(z - 1);
        let mut sum = BigRational::zero();
        let mut pw = w.clone();
        for m in 1..=terms {
            let term = &pw / BigRational::from_integer(BigInt::from(m));
            sum = if m % 2 == 1 { sum + term } else { sum - term };
            pw = &pw * &w;
        }
        sum = sum / BigRational::from_integer(BigInt::from(order));
        let num = sum.numer().mod_floor(&modulus);
        let den = mod_inverse(sum.denom(), &modulus).unwrap();
        (num * den).mod_floor(&modulus)
    }

    #[test]
    fn log_of_one_is_zero() {
        assert!(log_int(5, 1, 10).is_zero());
    }

    #[test]
    fn log_is_additive_on_squares() {
        let l2 = log_int(5, 2, 12);
        let l4 = log_int(5, 4, 12);
        assert!(l4.congruent(&l2.mul_int(&BigInt::from(2)), 12));
    }

    #[test]
    fn log_6_matches_series_oracle() {
        // the oracle sums enough terms of the raw series over Q for 16 digits
        let x = log_int(5, 6, 10);
        assert_eq!(x.precision(), 10);
        assert_eq!(x.a(), &oracle_log(5, 6, 10, 40));
    }

    #[test]
    fn exp_inverts_log() {
        let f = q(7);
        let l8 = padic_log_exact(f, &BigInt::from(8), &BigInt::zero(), 20).unwrap();
        let e = padic_exp(&l8, 20).unwrap();
        assert!(e.congruent(&LocalElement::from_int(f, 8, 20), 18));
        assert!(padic_exp(&LocalElement::zero(f, 10), 10).unwrap() == LocalElement::one(f, 10));
    }

    #[test]
    fn unramified_round_trip() {
        let f = LocalField::new(5, Ext::Ur(2)).unwrap();
        let u = LocalElement::new(f, BigInt::from(6), BigInt::zero(), 30);
        let l = padic_log(&u, 20).unwrap();
        let back = padic_exp(&l, 20).unwrap();
        assert!(back.congruent(&u, 18));
    }

    #[test]
    fn p2_principal_part() {
        let (ord, u1) = principal_unit_part(&LocalElement::from_int(q(2), 3, 20)).unwrap();
        assert_eq!(ord, 2);
        assert_eq!(u1.a() % BigInt::from(4), BigInt::one());
        let l3 = log_int(2, 3, 20);
        let l9 = log_int(2, 9, 20);
        assert!(l9.congruent(&l3.mul_int(&BigInt::from(2)), 19));
    }

    #[test]
    fn teichmuller_split() {
        let f = q(5);
        let u = LocalElement::from_int(f, 2, 20);
        let (ord, u1) = principal_unit_part(&u).unwrap();
        assert_eq!(ord, 4);
        assert_eq!(u1.a() % BigInt::from(5), BigInt::one());
        assert!(padic_log(&u1, 15)
            .unwrap()
            .congruent(&padic_log(&u, 15).unwrap(), 15));
    }

    #[test]
    fn orders() {
        let f = q(5);
        assert_eq!(unit_order(&LocalElement::from_int(f, 1, 3), 3).unwrap(), 1);
        assert_eq!(
            unit_order(&LocalElement::from_int(f, 2, 3), 3).unwrap(),
            100
        );
        assert_eq!(unit_order(&LocalElement::from_int(f, 7, 1), 1).unwrap(), 4);
    }

    #[test]
    fn non_unit_rejected() {
        assert_eq!(
            padic_log(&LocalElement::from_int(q(5), 10, 10), 5),
            Err(Error::NotAUnit)
        );
    }
}
