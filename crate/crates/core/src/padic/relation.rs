use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

use super::{valuation_big, LocalElement};

/// An integer relation `a·x = b·y`, primitive with `a > 0` (or `a = 0, b > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub a: i64,
    pub b: i64,
}

impl Relation {
    /// `y / x = a / b` as a fraction string.
    pub fn ratio(&self) -> String {
        format!("{}/{}", self.a, self.b)
    }
}

/// Residue coordinates of an element modulo `π^n`, with their p-power moduli.
fn coords(x: &LocalElement, n: i64) -> Vec<(BigInt, u32)> {
    let x = x.truncate(n);
    let (ea, eb) = x.field().coord_exponents(n);
    let mut out = vec![(x.a().clone(), ea)];
    if !x.field().is_trivial() {
        out.push((x.b().clone(), eb));
    }
    out
}

/// Solutions `b` of `b·y ≡ t` coordinatewise, as `b ≡ r mod p^k`.
fn solve_multiple(p: u64, y: &[(BigInt, u32)], t: &[(BigInt, u32)]) -> Option<(BigInt, u32)> {
    let pb = BigInt::from(p);
    let mut acc = (BigInt::zero(), 0u32);
    for ((yi, c), (ti, _)) in y.iter().zip(t) {
        let modulus = num_traits::pow(pb.clone(), *c as usize);
        let yi = yi.mod_floor(&modulus);
        let ti = ti.mod_floor(&modulus);
        if yi.is_zero() {
            if !ti.is_zero() {
                return None;
            }
            continue;
        }
        let v = valuation_big(&yi, p) as u32;
        if !ti.is_zero() && (valuation_big(&ti, p) as u32) < v {
            return None;
        }
        let pv = num_traits::pow(pb.clone(), v as usize);
        let k = c - v;
        let mk = num_traits::pow(pb.clone(), k as usize);
        let inv = super::mod_inverse(&(&yi / &pv), &mk).expect("unit");
        let r = ((&ti / &pv) * inv).mod_floor(&mk);
        // merge b ≡ acc.0 mod p^acc.1 with b ≡ r mod p^k
        let low = num_traits::pow(pb.clone(), acc.1.min(k) as usize);
        if !(&acc.0 - &r).mod_floor(&low).is_zero() {
            return None;
        }
        if k > acc.1 {
            acc = (r, k);
        }
    }
    Some(acc)
}

fn additive_order_exp(p: u64, y: &[(BigInt, u32)]) -> u32 {
    y.iter()
        .map(|(yi, c)| {
            let m = num_traits::pow(BigInt::from(p), *c as usize);
            let yi = yi.mod_floor(&m);
            if yi.is_zero() {
                0
            } else {
                c - valuation_big(&yi, p) as u32
            }
        })
        .max()
        .unwrap_or(0)
}

type Vec2 = (BigInt, BigInt);

fn dot(u: &Vec2, v: &Vec2) -> BigInt {
    &u.0 * &v.0 + &u.1 * &v.1
}

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let num: BigInt = n * &two + d;
    num.div_floor(&(d * &two))
}

/// Lagrange–Gauss reduction of a 2D basis.
fn gauss_reduce(mut u: Vec2, mut v: Vec2) -> (Vec2, Vec2) {
    loop {
        if dot(&u, &u) > dot(&v, &v) {
            std::mem::swap(&mut u, &mut v);
        }
        let mu = round_div(&dot(&u, &v), &dot(&u, &u));
        if mu.is_zero() {
            return (u, v);
        }
        v = (&v.0 - &mu * &u.0, &v.1 - &mu * &u.1);
        if dot(&v, &v) >= dot(&u, &u) {
            return (u, v);
        }
    }
}

/// Searches for `a·x ≡ b·y` with `|a|, |b| ≤ h` by lattice reduction on the
/// relation lattice modulo `π^{M−guard}`, `M` the common precision.
///
/// A candidate is returned only after it has been re-checked modulo `π^M`.
/// Fails with `Inconclusive` unless `h² ≤ p^{M−guard}/100`.
pub fn rational_ratio(
    x: &LocalElement,
    y: &LocalElement,
    h: u64,
    guard: i64,
) -> Result<Option<Relation>> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch);
    }
    if x.is_zero() || y.is_zero() {
        return Err(Error::Inconclusive(
            "operand is zero at its precision".into(),
        ));
    }
    let field = x.field();
    let p = field.p();
    let m = x.precision().min(y.precision());
    let work = m - guard;
    let hb = BigInt::from(h);
    if work <= 0 || &hb * &hb * 100 > num_traits::pow(BigInt::from(p), work as usize) {
        return Err(Error::Inconclusive(format!(
            "height bound {h} too large for {work} digits of {p}-adic precision"
        )));
    }
    let cx = coords(x, work);
    let cy: Vec<(BigInt, u32)> = coords(y, work).into_iter().map(|(c, k)| (-c, k)).collect();
    // lattice of (a, b) with a·x + b·(−y) ≡ 0
    let oy = num_traits::pow(BigInt::from(p), additive_order_exp(p, &cy) as usize);
    let mut j = 0u32;
    let first = loop {
        let d = num_traits::pow(BigInt::from(p), j as usize);
        let target: Vec<(BigInt, u32)> = cx.iter().map(|(c, k)| (-(c * &d), *k)).collect();
        if let Some((b0, _)) = solve_multiple(p, &cy, &target) {
            break (d, b0);
        }
        j += 1;
    };
    let (u, v) = gauss_reduce(first, (BigInt::zero(), oy));
    let candidates = [
        u.clone(),
        v.clone(),
        (&u.0 + &v.0, &u.1 + &v.1),
        (&u.0 - &v.0, &u.1 - &v.1),
    ];
    let best = candidates
        .iter()
        .filter(|c| !(c.0.is_zero() && c.1.is_zero()) && c.0.abs() <= hb && c.1.abs() <= hb)
        .min_by(|c1, c2| dot(c1, c1).cmp(&dot(c2, c2)).then(c1.cmp(c2)));
    let Some(best) = best else { return Ok(None) };
    let g = best.0.gcd(&best.1);
    let (mut a, mut b) = (&best.0 / &g, &best.1 / &g);
    if a.is_negative() || (a.is_zero() && b.is_negative()) {
        a = -a;
        b = -b;
    }
    let lhs = x.mul_int(&a);
    let rhs = y.mul_int(&b);
    let diff = lhs.sub(&rhs)?;
    if diff.valuation_bound() < m {
        return Ok(None);
    }
    Ok(Some(Relation {
        a: a.to_i64().expect("bounded by h"),
        b: b.to_i64().expect("bounded by h"),
    }))
}

/// Rank over `K_𝔭` of a matrix of local elements, counting pivots of
/// valuation below `t`. Pivots are chosen by minimal valuation.
pub fn qp_rank(matrix: &[Vec<LocalElement>], t: i64) -> Result<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = matrix[0].len();
    let field = matrix[0].first().map(|x| x.field());
    if matrix
        .iter()
        .any(|r| r.len() != cols || r.iter().any(|x| Some(x.field()) != field))
    {
        return Err(Error::FieldMismatch);
    }
    let mut a: Vec<Vec<LocalElement>> = matrix.to_vec();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut rank = 0;
    loop {
        let mut pivot: Option<(usize, usize, i64)> = None;
        let mut unresolved = false;
        for i in (0..rows).filter(|&i| !row_used[i]) {
            for j in (0..cols).filter(|&j| !col_used[j]) {
                match a[i][j].valuation() {
                    Some(v) if v < t => {
                        if pivot.is_none_or(|(_, _, pv)| v < pv) {
                            pivot = Some((i, j, v));
                        }
                    }
                    Some(_) => {}
                    None => unresolved |= a[i][j].precision() < t,
                }
            }
        }
        let Some((pi, pj, v)) = pivot else {
            if unresolved {
                return Err(Error::Inconclusive(format!(
                    "precision exhausted; rank ≥ {rank}"
                )));
            }
            return Ok(rank);
        };
        let unit_inv = a[pi][pj].div_pi_pow(v)?.inverse()?;
        for i in (0..rows).filter(|&i| !row_used[i] && i != pi) {
            if a[i][pj].is_zero() {
                continue;
            }
            let factor = a[i][pj].div_pi_pow(v)?.mul(&unit_inv)?;
            for j in 0..cols {
                let delta = factor.mul(&a[pi][j])?;
                a[i][j] = a[i][j].sub(&delta)?;
            }
        }
        row_used[pi] = true;
        col_used[pj] = true;
        rank += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{padic_log_exact, LocalField};

    fn ln(p: u64, x: i64, n: i64) -> LocalElement {
        padic_log_exact(
            LocalField::rational(p).unwrap(),
            &BigInt::from(x),
            &BigInt::zero(),
            n,
        )
        .unwrap()
    }

    #[test]
    fn equal_inputs_give_one() {
        let x = ln(5, 2, 30);
        assert_eq!(
            rational_ratio(&x, &x, 1000, 3).unwrap(),
            Some(Relation { a: 1, b: 1 })
        );
    }

    #[test]
    fn log_of_square() {
        let r = rational_ratio(&ln(5, 3, 30), &ln(5, 9, 30), 1000, 3)
            .unwrap()
            .unwrap();
        assert_eq!(r, Relation { a: 2, b: 1 });
        assert_eq!(r.ratio(), "2/1");
    }

    #[test]
    fn independent_logs_have_no_small_relation() {
        assert_eq!(
            rational_ratio(&ln(5, 2, 30), &ln(5, 3, 30), 1000, 3).unwrap(),
            None
        );
    }

    #[test]
    fn confidence_rule() {
        let err = rational_ratio(&ln(5, 2, 8), &ln(5, 3, 8), 1000, 3).unwrap_err();
        assert!(matches!(err, Error::Inconclusive(_)));
    }

    #[test]
    fn ranks() {
        let f = LocalField::rational(5).unwrap();
        let z = LocalElement::zero(f, 20);
        assert_eq!(
            qp_rank(&[vec![z.clone(), z.clone()], vec![z.clone(), z]], 15).unwrap(),
            0
        );
        let m = vec![
            vec![ln(5, 2, 20), ln(5, 4, 20)],
            vec![ln(5, 3, 20), ln(5, 9, 20)],
        ];
        assert_eq!(qp_rank(&m, 15).unwrap(), 1);
        let m = vec![
            vec![ln(5, 2, 20), ln(5, 3, 20), ln(5, 7, 20)],
            vec![ln(5, 11, 20), ln(5, 13, 20), ln(5, 17, 20)],
        ];
        assert_eq!(qp_rank(&m, 15).unwrap(), 2);
    }
}
